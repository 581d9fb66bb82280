#pragma once

#include "drest/learn.hpp"
#include "drest/types.hpp"

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

namespace drest {

/// Adds i.i.d. zero-mean Gaussian noise of standard deviation sigma to every
/// pixel. Seeded and fully deterministic; the output is not clipped.
Image add_gaussian_noise(const Image& img, double sigma, std::uint64_t seed);

/// 10*log10(255^2 / MSE) in dB; +infinity for identical images.
double psnr(const Image& ref, const Image& test);

struct DenoiseConfig {
  double sigma = 20.0;  ///< noise standard deviation (drives thresholds and the default schedule)
  int layers = 3;
  std::vector<PatchSpec> schedule;  ///< per-layer patch shapes; empty selects the default
  double eta_mult_first = 3.3;      ///< layer-1 threshold multiplier
  double eta_mult_rest = 3.1;       ///< threshold multiplier for layers >= 2
  int iters = 100;                  ///< training alternations per layer
  std::vector<double> pass_sigmas;  ///< per-pass threshold sigmas; empty means one pass at sigma
  std::uint64_t seed = 0;           ///< noise-simulation seed (recorded by drivers)
};

/// Default patch shapes: 9x9 in layer 1, then depth-only filters of length
/// 49/36/25/16. At sigma >= 100 the later layers shrink to 36/25/16/9 so the
/// model does not fit the noise. Supports up to 5 layers.
std::vector<PatchSpec> default_layer_schedule(int layers, double sigma);

/// Expands a DenoiseConfig into per-layer configs for one pass: thresholds
/// are eta_mult_first * eta_sigma for layer 1 and eta_mult_rest * eta_sigma
/// below, and each layer keeps exactly as many residual maps as the next
/// layer's patch depth.
std::vector<LayerConfig> make_layer_configs(const DenoiseConfig& cfg, double eta_sigma);

struct DenoiseReport {
  double input_psnr = std::numeric_limits<double>::quiet_NaN();  ///< vs reference, when given
  std::vector<double> pass_psnr;    ///< per-pass output PSNR vs reference (NaN without one)
  std::vector<TrainReport> passes;  ///< per-pass training stats
  double seconds = 0.0;
};

/// Learns a model from the noisy image itself, then encodes and decodes the
/// same image. The optional reference is only used to fill the PSNR fields.
std::pair<Image, DenoiseReport> denoise_single_pass(const Image& noisy, const DenoiseConfig& cfg,
                                                    const Image* reference = nullptr);

/// Runs one single-pass round per entry of pass_sigmas, each pass consuming
/// the previous output and using its own threshold sigma. The layer schedule
/// stays fixed across passes (it is tied to cfg.sigma, the actual noise
/// level, not to the per-pass estimates).
std::pair<Image, DenoiseReport> denoise_multipass(const Image& noisy, const DenoiseConfig& cfg,
                                                  const Image* reference = nullptr);

}  // namespace drest
