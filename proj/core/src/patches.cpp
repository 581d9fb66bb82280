#include "drest/patches.hpp"

#include <stdexcept>
#include <string>

namespace drest {

namespace {

void check_spec(const ResidualVolume& vol, const PatchSpec& spec) {
  if (vol.depth() < 1) throw std::invalid_argument("extract_patches: empty volume");
  if (spec.rows < 1 || spec.cols < 1 || spec.depth < 1)
    throw std::invalid_argument("extract_patches: patch dimensions must be positive");
  if (spec.depth != vol.depth())
    throw std::invalid_argument("extract_patches: patch depth " + std::to_string(spec.depth) +
                                " != volume depth " + std::to_string(vol.depth()));
  if (spec.rows > vol.height() || spec.cols > vol.width())
    throw std::invalid_argument("extract_patches: patch larger than volume");
}

}  // namespace

PatchMatrix extract_patches(const ResidualVolume& vol, const PatchSpec& spec) {
  check_spec(vol, spec);
  const int h = vol.height(), w = vol.width();
  const int n = spec.patch_len();
  PatchMatrix pm(n, static_cast<Eigen::Index>(h) * w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Eigen::Index k = static_cast<Eigen::Index>(y) * w + x;
      int r = 0;
      for (int d = 0; d < spec.depth; ++d) {
        const Eigen::MatrixXd& map = vol.maps[d];
        for (int i = 0; i < spec.rows; ++i) {
          const int yy = (y + i) % h;
          for (int j = 0; j < spec.cols; ++j) {
            pm(r++, k) = map(yy, (x + j) % w);
          }
        }
      }
    }
  }
  return pm;
}

ResidualVolume aggregate_patches(const PatchMatrix& pm, int depth, int height, int width,
                                 const PatchSpec& spec) {
  if (depth != spec.depth)
    throw std::invalid_argument("aggregate_patches: target depth != spec.depth");
  if (height < spec.rows || width < spec.cols || height < 1 || width < 1)
    throw std::invalid_argument("aggregate_patches: target smaller than patch");
  if (pm.rows() != spec.patch_len() ||
      pm.cols() != static_cast<Eigen::Index>(height) * width)
    throw std::invalid_argument("aggregate_patches: patch matrix dimensions inconsistent");

  ResidualVolume out(depth, height, width);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const Eigen::Index k = static_cast<Eigen::Index>(y) * width + x;
      int r = 0;
      for (int d = 0; d < spec.depth; ++d) {
        Eigen::MatrixXd& map = out.maps[d];
        for (int i = 0; i < spec.rows; ++i) {
          const int yy = (y + i) % height;
          for (int j = 0; j < spec.cols; ++j) {
            map(yy, (x + j) % width) += pm(r++, k);
          }
        }
      }
    }
  }
  // stride 1 + wrap-around: every voxel received exactly rows*cols contributions
  const double inv = 1.0 / (static_cast<double>(spec.rows) * spec.cols);
  for (auto& m : out.maps) m *= inv;
  return out;
}

Eigen::MatrixXd maps_to_rows(const ResidualVolume& vol) {
  const int h = vol.height(), w = vol.width();
  Eigen::MatrixXd m(vol.depth(), static_cast<Eigen::Index>(h) * w);
  for (int d = 0; d < vol.depth(); ++d) {
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        m(d, static_cast<Eigen::Index>(y) * w + x) = vol.maps[d](y, x);
  }
  return m;
}

ResidualVolume rows_to_maps(const Eigen::MatrixXd& m, int height, int width) {
  if (m.cols() != static_cast<Eigen::Index>(height) * width)
    throw std::invalid_argument("rows_to_maps: column count != height*width");
  ResidualVolume out(static_cast<int>(m.rows()), height, width);
  for (int d = 0; d < m.rows(); ++d) {
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x)
        out.maps[d](y, x) = m(d, static_cast<Eigen::Index>(y) * width + x);
  }
  return out;
}

}  // namespace drest
