#pragma once

#include "drest/model.hpp"
#include "drest/types.hpp"

#include <vector>

namespace drest {

struct LayerTrainResult {
  UnitaryTransform omega;
  CoefficientMaps coeffs;
  Eigen::MatrixXd transformed;  ///< omega * patches for the returned omega
  std::vector<double> costs;    ///< objective after each alternation's transform update
};

/// Alternating minimization of ||omega*P - Z||_F^2 + eta^2 ||Z||_0 over a
/// unitary omega and Z, starting from `init`. Each alternation is a sparse
/// coding step followed by a Procrustes transform update; the objective is
/// recorded after the transform update and never increases.
LayerTrainResult train_layer(const PatchMatrix& patches, const UnitaryTransform& init,
                             double eta, int iters);

struct LayerReport {
  std::vector<double> costs;
  double sparsity = 0.0;  ///< nonzero fraction of the final coefficient maps
  std::vector<int> retained;
  double seconds = 0.0;
};

struct TrainReport {
  std::vector<LayerReport> layers;
};

struct TrainResult {
  DeepRestModel model;
  TrainReport report;
};

/// Greedy layer-by-layer training on one image: train layer l on the current
/// residual volume, form the residuals, keep the `keep` highest-energy maps,
/// and move on. Layer 1 starts from the 2D DCT, later layers from the
/// identity. Deterministic: there is no randomness anywhere in the pipeline.
TrainResult train_model(const Image& img, const std::vector<LayerConfig>& configs);

/// Renders the rows of a transform as a tiled image: a x b tiles for 2D
/// atoms, nearest-square tiles (zero-padded) otherwise, each min-max
/// normalized to 0..255 and separated by 1-pixel black rules.
Image atom_montage(const UnitaryTransform& omega, const PatchSpec& spec);

}  // namespace drest
