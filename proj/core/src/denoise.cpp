#include "drest/denoise.hpp"

#include "drest/model.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace drest {

Image add_gaussian_noise(const Image& img, double sigma, std::uint64_t seed) {
  if (sigma < 0.0) throw std::invalid_argument("add_gaussian_noise: negative sigma");
  Image out = img;
  if (sigma == 0.0) return out;

  // Box-Muller over mt19937_64 draws; fixed here so a seed pins the exact
  // realization independently of the standard library's normal_distribution.
  std::mt19937_64 rng(seed);
  const auto uniform = [&rng]() { return (rng() >> 11) * 0x1.0p-53; };  // [0, 1)
  double cached = 0.0;
  bool has_cached = false;
  for (Eigen::Index y = 0; y < out.rows(); ++y) {
    for (Eigen::Index x = 0; x < out.cols(); ++x) {
      double z;
      if (has_cached) {
        z = cached;
        has_cached = false;
      } else {
        const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        z = r * std::cos(2.0 * std::numbers::pi * u2);
        cached = r * std::sin(2.0 * std::numbers::pi * u2);
        has_cached = true;
      }
      out(y, x) += sigma * z;
    }
  }
  return out;
}

double psnr(const Image& ref, const Image& test) {
  if (ref.rows() != test.rows() || ref.cols() != test.cols())
    throw std::invalid_argument("psnr: image dimensions differ");
  const double se = (ref - test).squaredNorm();
  if (se == 0.0) return std::numeric_limits<double>::infinity();
  const double mse = se / (static_cast<double>(ref.rows()) * static_cast<double>(ref.cols()));
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

std::vector<PatchSpec> default_layer_schedule(int layers, double sigma) {
  if (layers < 1) throw std::invalid_argument("default_layer_schedule: layers must be >= 1");
  if (layers > 5)
    throw std::invalid_argument("default_layer_schedule: no default beyond 5 layers");
  static constexpr int kDepths[] = {49, 36, 25, 16};
  static constexpr int kDepthsLargeSigma[] = {36, 25, 16, 9};
  const int* depths = sigma >= 100.0 ? kDepthsLargeSigma : kDepths;
  std::vector<PatchSpec> schedule{PatchSpec{9, 9, 1}};
  for (int l = 1; l < layers; ++l) schedule.push_back(PatchSpec{1, 1, depths[l - 1]});
  return schedule;
}

std::vector<LayerConfig> make_layer_configs(const DenoiseConfig& cfg, double eta_sigma) {
  if (eta_sigma < 0.0) throw std::invalid_argument("make_layer_configs: negative sigma");
  if (cfg.eta_mult_first <= 0.0 || cfg.eta_mult_rest <= 0.0)
    throw std::invalid_argument("make_layer_configs: threshold multipliers must be positive");
  const std::vector<PatchSpec> schedule =
      cfg.schedule.empty() ? default_layer_schedule(cfg.layers, cfg.sigma) : cfg.schedule;
  if (static_cast<int>(schedule.size()) != cfg.layers)
    throw std::invalid_argument("make_layer_configs: schedule length != layer count");

  std::vector<LayerConfig> configs;
  configs.reserve(schedule.size());
  for (std::size_t l = 0; l < schedule.size(); ++l) {
    LayerConfig c;
    c.patch = schedule[l];
    c.eta = (l == 0 ? cfg.eta_mult_first : cfg.eta_mult_rest) * eta_sigma;
    c.iters = cfg.iters;
    c.keep = l + 1 < schedule.size() ? schedule[l + 1].depth : schedule[l].patch_len();
    configs.push_back(c);
  }
  validate_config_chain(configs);
  return configs;
}

namespace {

Image denoise_once(const Image& noisy, double eta_sigma, const DenoiseConfig& cfg,
                   TrainReport* report) {
  TrainResult tr = train_model(noisy, make_layer_configs(cfg, eta_sigma));
  if (report) *report = std::move(tr.report);
  return decode(encode(noisy, tr.model), tr.model);
}

std::pair<Image, DenoiseReport> run_passes(const Image& noisy,
                                           const std::vector<double>& pass_sigmas,
                                           const DenoiseConfig& cfg, const Image* reference) {
  const auto t0 = std::chrono::steady_clock::now();
  DenoiseReport report;
  if (reference) report.input_psnr = psnr(*reference, noisy);

  Image current = noisy;
  for (double s : pass_sigmas) {
    TrainReport tr;
    current = denoise_once(current, s, cfg, &tr);
    report.passes.push_back(std::move(tr));
    report.pass_psnr.push_back(reference ? psnr(*reference, current)
                                         : std::numeric_limits<double>::quiet_NaN());
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {std::move(current), std::move(report)};
}

}  // namespace

std::pair<Image, DenoiseReport> denoise_single_pass(const Image& noisy, const DenoiseConfig& cfg,
                                                    const Image* reference) {
  const double eta_sigma = cfg.pass_sigmas.empty() ? cfg.sigma : cfg.pass_sigmas.front();
  return run_passes(noisy, {eta_sigma}, cfg, reference);
}

std::pair<Image, DenoiseReport> denoise_multipass(const Image& noisy, const DenoiseConfig& cfg,
                                                  const Image* reference) {
  const std::vector<double> sigmas =
      cfg.pass_sigmas.empty() ? std::vector<double>{cfg.sigma} : cfg.pass_sigmas;
  return run_passes(noisy, sigmas, cfg, reference);
}

}  // namespace drest
