#include "drest/denoise.hpp"

#include "drest/pgm.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace drest;

TEST_CASE("add_gaussian_noise with sigma zero is the identity") {
  Image img(3, 4);
  img.setRandom();
  CHECK(add_gaussian_noise(img, 0.0, 99) == img);
  CHECK_THROWS_AS(add_gaussian_noise(img, -1.0, 0), std::invalid_argument);
}

TEST_CASE("add_gaussian_noise realizes the pinned Box-Muller sequence") {
  // Frozen oracle: mt19937_64(seed), u = (next() >> 11) * 2^-53, then
  // z = sqrt(-2 ln(1-u1)) * {cos,sin}(2 pi u2), pixels in row-major order.
  // Values recomputed independently from the generator's specification.
  const Image zero = Image::Zero(2, 3);
  const Image n42 = add_gaussian_noise(zero, 1.0, 42);
  CHECK(n42(0, 0) == doctest::Approx(-1.0771745442782885).epsilon(1e-13));
  CHECK(n42(0, 1) == doctest::Approx(-1.2860634502166481).epsilon(1e-13));
  CHECK(n42(0, 2) == doctest::Approx(1.0945198485006107).epsilon(1e-13));
  CHECK(n42(1, 0) == doctest::Approx(1.2616856516484893).epsilon(1e-13));

  const Image n0 = add_gaussian_noise(zero, 2.0, 0);
  CHECK(n0(0, 0) == doctest::Approx(2.0 * 0.58937880373630924).epsilon(1e-13));
  CHECK(n0(0, 1) == doctest::Approx(2.0 * -0.029111312662311217).epsilon(1e-13));
}

TEST_CASE("add_gaussian_noise is seed-deterministic and seed-sensitive") {
  Image img(8, 8);
  img.setConstant(128.0);
  const Image a = add_gaussian_noise(img, 20.0, 7);
  const Image b = add_gaussian_noise(img, 20.0, 7);
  const Image c = add_gaussian_noise(img, 20.0, 8);
  CHECK(a == b);
  CHECK(a != c);
  // Values are not clipped to [0, 255].
  Image bright(4, 4);
  bright.setConstant(250.0);
  CHECK(add_gaussian_noise(bright, 100.0, 3).maxCoeff() > 255.0);
}

TEST_CASE("add_gaussian_noise matches its nominal moments on a large image") {
  const Image zero = Image::Zero(512, 512);
  const Image noise = add_gaussian_noise(zero, 20.0, 12345);
  const double n = static_cast<double>(noise.size());
  const double mean = noise.sum() / n;
  const double std = std::sqrt((noise.array() - mean).square().sum() / (n - 1.0));
  CHECK(std::abs(mean) < 0.16);                 // ~4 sigma/sqrt(N)
  CHECK(std == doctest::Approx(20.0).epsilon(0.015));
}

TEST_CASE("psnr matches the analytic formula and sentinels") {
  const Image ref = Image::Zero(10, 10);
  Image test = Image::Constant(10, 10, 10.0);
  // MSE = 100 -> 10 log10(255^2/100)
  CHECK(psnr(ref, test) == doctest::Approx(10.0 * std::log10(65025.0 / 100.0)).epsilon(1e-12));
  CHECK(std::isinf(psnr(ref, ref)));
  CHECK(psnr(ref, ref) > 0);
  CHECK_THROWS_AS(psnr(ref, Image::Zero(10, 9)), std::invalid_argument);
  // Higher PSNR for a closer image.
  CHECK(psnr(ref, Image::Constant(10, 10, 5.0)) > psnr(ref, test));
}

TEST_CASE("default_layer_schedule follows the published depth ladder") {
  const auto s3 = default_layer_schedule(3, 20.0);
  REQUIRE(s3.size() == 3);
  CHECK(s3[0] == PatchSpec{9, 9, 1});
  CHECK(s3[1] == PatchSpec{1, 1, 49});
  CHECK(s3[2] == PatchSpec{1, 1, 36});

  const auto s5 = default_layer_schedule(5, 30.0);
  REQUIRE(s5.size() == 5);
  CHECK(s5[3] == PatchSpec{1, 1, 25});
  CHECK(s5[4] == PatchSpec{1, 1, 16});

  // At very high noise the later layers shrink.
  const auto s5_100 = default_layer_schedule(5, 100.0);
  CHECK(s5_100[0] == PatchSpec{9, 9, 1});
  CHECK(s5_100[1] == PatchSpec{1, 1, 36});
  CHECK(s5_100[2] == PatchSpec{1, 1, 25});
  CHECK(s5_100[3] == PatchSpec{1, 1, 16});
  CHECK(s5_100[4] == PatchSpec{1, 1, 9});

  CHECK(default_layer_schedule(1, 20.0).size() == 1);
  CHECK_THROWS_AS(default_layer_schedule(0, 20.0), std::invalid_argument);
  CHECK_THROWS_AS(default_layer_schedule(6, 20.0), std::invalid_argument);
}

TEST_CASE("make_layer_configs sets thresholds 3.3 sigma then 3.1 sigma") {
  DenoiseConfig cfg;
  cfg.sigma = 20.0;
  cfg.layers = 3;
  const auto configs = make_layer_configs(cfg, cfg.sigma);
  REQUIRE(configs.size() == 3);
  CHECK(configs[0].eta == doctest::Approx(66.0).epsilon(1e-12));
  CHECK(configs[1].eta == doctest::Approx(62.0).epsilon(1e-12));
  CHECK(configs[2].eta == doctest::Approx(62.0).epsilon(1e-12));
  // Each layer keeps exactly the next layer's patch depth.
  CHECK(configs[0].keep == 49);
  CHECK(configs[1].keep == 36);
  CHECK(configs[0].iters == 100);

  // sigma 14 reproduces the published qualitative-experiment thresholds.
  const auto cfg14 = make_layer_configs(cfg, 14.0);
  CHECK(cfg14[0].eta == doctest::Approx(46.2).epsilon(1e-12));
  CHECK(cfg14[1].eta == doctest::Approx(43.4).epsilon(1e-12));

  // The threshold scales linearly with the sigma estimate.
  const auto cfg10 = make_layer_configs(cfg, 10.0);
  CHECK(cfg10[0].eta == doctest::Approx(33.0).epsilon(1e-12));

  DenoiseConfig bad = cfg;
  bad.schedule = {PatchSpec{9, 9, 1}};  // length 1 != layers 3
  CHECK_THROWS_AS(make_layer_configs(bad, 20.0), std::invalid_argument);
}

TEST_CASE("multipass with a single pass sigma equals single_pass") {
  const Image clean = load_image(std::string(DREST_DATA_DIR) + "/camera.pgm")
                          .block(128, 128, 48, 48)
                          .eval();
  const Image noisy = add_gaussian_noise(clean, 20.0, 4);
  DenoiseConfig cfg;
  cfg.sigma = 20.0;
  cfg.layers = 2;
  cfg.iters = 4;
  cfg.pass_sigmas = {20.0};
  const auto [img_m, rep_m] = denoise_multipass(noisy, cfg, &clean);
  const auto [img_s, rep_s] = denoise_single_pass(noisy, cfg, &clean);
  CHECK(img_m == img_s);
  CHECK(rep_m.pass_psnr == rep_s.pass_psnr);
  REQUIRE(rep_m.passes.size() == 1);
  CHECK(rep_m.input_psnr == doctest::Approx(psnr(clean, noisy)));
}

TEST_CASE("denoising a noisy crop improves PSNR substantially") {
  const Image clean = load_image(std::string(DREST_DATA_DIR) + "/camera.pgm")
                          .block(192, 192, 64, 64)
                          .eval();
  const Image noisy = add_gaussian_noise(clean, 20.0, 11);
  DenoiseConfig cfg;
  cfg.sigma = 20.0;
  cfg.layers = 2;
  cfg.iters = 10;
  const auto [denoised, rep] = denoise_single_pass(noisy, cfg, &clean);
  REQUIRE(rep.pass_psnr.size() == 1);
  CHECK(rep.pass_psnr[0] > rep.input_psnr + 3.0);
  CHECK(rep.pass_psnr[0] == doctest::Approx(psnr(clean, denoised)));
  // The report carries one training record per layer with full trajectories.
  REQUIRE(rep.passes.size() == 1);
  REQUIRE(rep.passes[0].layers.size() == 2);
  CHECK(rep.passes[0].layers[0].costs.size() == 10);
}

TEST_CASE("two passes run back to back and are reported separately") {
  const Image clean = load_image(std::string(DREST_DATA_DIR) + "/camera.pgm")
                          .block(64, 64, 32, 32)
                          .eval();
  const Image noisy = add_gaussian_noise(clean, 100.0, 2);
  DenoiseConfig cfg;
  cfg.sigma = 100.0;
  cfg.layers = 2;
  cfg.iters = 3;
  cfg.pass_sigmas = {90.0, 20.0};
  const auto [denoised, rep] = denoise_multipass(noisy, cfg, &clean);
  REQUIRE(rep.passes.size() == 2);
  REQUIRE(rep.pass_psnr.size() == 2);
  CHECK(rep.pass_psnr[1] == doctest::Approx(psnr(clean, denoised)));

  // Scripted equivalent: pass 2 consumes pass 1's output with its own
  // thresholds while the schedule stays tied to the true sigma.
  DenoiseConfig p1 = cfg;
  p1.pass_sigmas = {90.0};
  const auto [mid, rep1] = denoise_single_pass(noisy, p1, &clean);
  DenoiseConfig p2 = cfg;
  p2.pass_sigmas = {20.0};
  const auto [end, rep2] = denoise_single_pass(mid, p2, &clean);
  CHECK(denoised == end);
}
