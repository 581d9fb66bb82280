#include "drest/learn.hpp"

#include "drest/patches.hpp"
#include "drest/transform.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace drest {

LayerTrainResult train_layer(const PatchMatrix& patches, const UnitaryTransform& init,
                             double eta, int iters) {
  if (init.rows() != init.cols() || init.rows() != patches.rows())
    throw std::invalid_argument("train_layer: init transform does not match patch length");
  if (iters < 1) throw std::invalid_argument("train_layer: iters must be >= 1");
  if (eta < 0.0) throw std::invalid_argument("train_layer: negative eta");

  LayerTrainResult r;
  r.omega = init;
  Eigen::MatrixXd t = r.omega * patches;
  r.costs.reserve(iters);
  for (int it = 0; it < iters; ++it) {
    r.coeffs = hard_threshold(t, eta);
    r.omega = procrustes_update(patches, r.coeffs);
    t.noalias() = r.omega * patches;
    r.costs.push_back((t - r.coeffs).squaredNorm() +
                      eta * eta * static_cast<double>(nnz(r.coeffs)));
  }
  r.transformed = std::move(t);
  return r;
}

TrainResult train_model(const Image& img, const std::vector<LayerConfig>& configs) {
  validate_config_chain(configs);

  TrainResult out;
  out.model.height = static_cast<int>(img.rows());
  out.model.width = static_cast<int>(img.cols());
  out.model.configs = configs;

  ResidualVolume vol = ResidualVolume::from_image(img);
  const int last = static_cast<int>(configs.size()) - 1;
  for (int l = 0; l <= last; ++l) {
    const auto t0 = std::chrono::steady_clock::now();
    const LayerConfig& cfg = configs[l];
    const int m = cfg.patch.patch_len();

    const PatchMatrix p = extract_patches(vol, cfg.patch);
    const UnitaryTransform init =
        l == 0 ? dct2_init(cfg.patch.rows, cfg.patch.cols)
               : UnitaryTransform(Eigen::MatrixXd::Identity(m, m));
    LayerTrainResult lt = train_layer(p, init, cfg.eta, cfg.iters);

    LayerReport rep;
    rep.costs = std::move(lt.costs);
    rep.sparsity = static_cast<double>(nnz(lt.coeffs)) /
                   (static_cast<double>(m) * static_cast<double>(p.cols()));

    TransformLayer layer{std::move(lt.omega), {}};
    if (l != last) {
      ResidualVolume rvol =
          rows_to_maps(lt.transformed - lt.coeffs, vol.height(), vol.width());
      auto [kept, retained] = downsample_residuals(rvol, cfg.keep);
      layer.retained = retained;
      rep.retained = std::move(retained);
      vol = std::move(kept);
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.model.layers.push_back(std::move(layer));
    out.report.layers.push_back(std::move(rep));
  }
  return out;
}

Image atom_montage(const UnitaryTransform& omega, const PatchSpec& spec) {
  const int m = static_cast<int>(omega.rows());
  const int n = static_cast<int>(omega.cols());
  if (m < 1 || n != spec.patch_len())
    throw std::invalid_argument("atom_montage: transform width != patch length");

  int tile_h, tile_w;
  if (spec.depth == 1) {
    tile_h = spec.rows;
    tile_w = spec.cols;
  } else {
    tile_w = tile_h = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
  }

  const int grid_cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(m))));
  const int grid_rows = (m + grid_cols - 1) / grid_cols;

  Image montage = Image::Zero(grid_rows * tile_h + (grid_rows - 1),
                              grid_cols * tile_w + (grid_cols - 1));
  for (int atom = 0; atom < m; ++atom) {
    // zero-pad the atom to the tile, then min-max normalize the whole tile
    Eigen::VectorXd tile = Eigen::VectorXd::Zero(tile_h * tile_w);
    tile.head(n) = omega.row(atom);
    const double lo = tile.minCoeff(), hi = tile.maxCoeff();
    const double range = hi - lo;
    const int y0 = (atom / grid_cols) * (tile_h + 1);
    const int x0 = (atom % grid_cols) * (tile_w + 1);
    for (int e = 0; e < tile_h * tile_w; ++e) {
      const double v = range > 0.0 ? (tile(e) - lo) / range * 255.0 : 127.5;
      montage(y0 + e / tile_w, x0 + e % tile_w) = v;
    }
  }
  return montage;
}

}  // namespace drest
