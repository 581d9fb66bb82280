#pragma once

#include "drest/types.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace drest {

/// Per-layer training/coding parameters.
struct LayerConfig {
  PatchSpec patch;
  double eta = 0.0;  ///< hard threshold
  int keep = 0;      ///< residual maps retained for the next layer; ignored for the last layer
  int iters = 1;     ///< training alternations

  bool operator==(const LayerConfig&) const = default;
};

/// One learned layer: the transform plus which residual maps survive
/// downsampling (empty for the last layer, which produces no residuals).
struct TransformLayer {
  UnitaryTransform omega;
  std::vector<int> retained;  ///< ascending, distinct, in [0, omega.rows())
};

/// The full L-layer model. Acts as encoder (encode) and decoder (decode) for
/// images of the size it was trained at.
struct DeepRestModel {
  std::vector<TransformLayer> layers;
  std::vector<LayerConfig> configs;
  int height = 0;
  int width = 0;

  int num_layers() const { return static_cast<int>(layers.size()); }
};

/// Coefficient maps Z^1..Z^L of one encoded image.
struct EncodedImage {
  std::vector<CoefficientMaps> coeffs;
};

struct ForwardResult {
  CoefficientMaps coeffs;
  std::optional<ResidualVolume> residual;  ///< absent for the last layer
};

/// One encoder step: Z = H_eta(omega * P(vol)); unless `is_last`, also the
/// residual omega*P(vol) - Z reshaped into a volume (row i -> map i).
ForwardResult forward_layer(const ResidualVolume& vol, const TransformLayer& layer,
                            const LayerConfig& cfg, bool is_last);

/// Keeps the `keep` highest-energy maps (energy = sum of squared entries,
/// ties broken toward the lower index). Returns the reduced volume and the
/// retained indices in ascending order.
std::pair<ResidualVolume, std::vector<int>> downsample_residuals(const ResidualVolume& r,
                                                                 int keep);

/// Volume with layer.retained map indices restored at their original
/// positions and zeros elsewhere; `full_depth` is the depth before
/// downsampling.
ResidualVolume reinflate_residuals(const ResidualVolume& kept, const std::vector<int>& retained,
                                   int full_depth);

/// Full forward pass. Uses each layer's stored retained list (no re-ranking),
/// so encoding is reproducible and consistent with decode.
EncodedImage encode(const Image& img, const DeepRestModel& model);

/// Reconstructs the image by backpropagating coefficients through the layers:
/// the top layer's patch matrix is omega^T Z; below that, omega^T (Z + R) with
/// R the re-inflated residual volume in map-per-row form; each patch matrix is
/// aggregated by averaging into the next volume down.
Image decode(const EncodedImage& enc, const DeepRestModel& model);

/// Validates the depth chain: c_1 = 1, c_{l+1} = keep_l, 1 <= keep_l <= m_l.
/// Throws std::invalid_argument with a description of the first violation.
void validate_config_chain(const std::vector<LayerConfig>& configs);

}  // namespace drest
