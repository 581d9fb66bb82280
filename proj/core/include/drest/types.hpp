#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <vector>

namespace drest {

/// Grayscale image: rows = height, cols = width. Intensities are real-valued
/// with a nominal 0-255 range; nothing clamps internally.
using Image = Eigen::MatrixXd;

/// One column per pixel position; each column is a vectorized patch.
using PatchMatrix = Eigen::MatrixXd;

/// Row i is the row-vectorized coefficient map of filter i.
using CoefficientMaps = Eigen::MatrixXd;

/// Square matrix whose rows are a layer's vectorized filters. Kept unitary
/// (Frobenius norm of omega^T omega - I below 1e-10).
using UnitaryTransform = Eigen::MatrixXd;

/// Patch geometry: rows x cols spatially, depth along the map stack.
/// The spatial stride is fixed at 1 with wrap-around boundaries, so a
/// volume of H x W pixels always yields H*W patches.
struct PatchSpec {
  int rows = 1;
  int cols = 1;
  int depth = 1;

  int patch_len() const { return rows * cols * depth; }

  bool operator==(const PatchSpec&) const = default;
};

/// Depth-stack of equally sized real-valued maps. An image is the depth-1
/// case. Map d is maps[d], an height() x width() matrix.
struct ResidualVolume {
  std::vector<Eigen::MatrixXd> maps;

  ResidualVolume() = default;
  ResidualVolume(int depth, int height, int width)
      : maps(static_cast<std::size_t>(depth), Eigen::MatrixXd::Zero(height, width)) {
    if (depth < 1 || height < 1 || width < 1)
      throw std::invalid_argument("ResidualVolume: dimensions must be positive");
  }

  static ResidualVolume from_image(Image img) {
    if (img.rows() < 1 || img.cols() < 1)
      throw std::invalid_argument("ResidualVolume: empty image");
    ResidualVolume v;
    v.maps.push_back(std::move(img));
    return v;
  }

  int depth() const { return static_cast<int>(maps.size()); }
  int height() const { return maps.empty() ? 0 : static_cast<int>(maps[0].rows()); }
  int width() const { return maps.empty() ? 0 : static_cast<int>(maps[0].cols()); }

  const Image& as_image() const {
    if (depth() != 1)
      throw std::invalid_argument("ResidualVolume::as_image: depth != 1");
    return maps[0];
  }

  double squared_norm() const {
    double s = 0.0;
    for (const auto& m : maps) s += m.squaredNorm();
    return s;
  }
};

}  // namespace drest
