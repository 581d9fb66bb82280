// Microbenchmarks for the hot paths: patch extraction/aggregation, the two
// halves of one alternation (thresholded coding and the Procrustes update),
// and a small end-to-end denoise. Run: ./drest_benchmarks [--benchmark_filter=...]
#include "drest/denoise.hpp"
#include "drest/learn.hpp"
#include "drest/patches.hpp"
#include "drest/transform.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace drest;

Image random_image(int rows, int cols, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> px(0.0, 255.0);
  Image img(rows, cols);
  for (Eigen::Index y = 0; y < rows; ++y)
    for (Eigen::Index x = 0; x < cols; ++x) img(y, x) = px(rng);
  return img;
}

ResidualVolume image_volume(const Image& img) {
  ResidualVolume vol(1, static_cast<int>(img.rows()), static_cast<int>(img.cols()));
  vol.maps[0] = img;
  return vol;
}

void BM_ExtractPatches(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const ResidualVolume vol = image_volume(random_image(side, side, 1));
  const PatchSpec spec{9, 9, 1};
  for (auto _ : state) {
    PatchMatrix p = extract_patches(vol, spec);
    benchmark::DoNotOptimize(p.data());
  }
  state.SetItemsProcessed(state.iterations() * side * side);
}
BENCHMARK(BM_ExtractPatches)->Arg(128)->Arg(256);

void BM_AggregatePatches(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const PatchSpec spec{9, 9, 1};
  const PatchMatrix p = extract_patches(image_volume(random_image(side, side, 2)), spec);
  for (auto _ : state) {
    ResidualVolume v = aggregate_patches(p, 1, side, side, spec);
    benchmark::DoNotOptimize(v.maps[0].data());
  }
  state.SetItemsProcessed(state.iterations() * side * side);
}
BENCHMARK(BM_AggregatePatches)->Arg(128)->Arg(256);

void BM_SparseCode(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const PatchMatrix p = extract_patches(image_volume(random_image(side, side, 3)), PatchSpec{9, 9, 1});
  const Eigen::MatrixXd omega = dct2_init(9, 9);
  for (auto _ : state) {
    CoefficientMaps z = sparse_code_layer(omega, p, 66.0);
    benchmark::DoNotOptimize(z.data());
  }
}
BENCHMARK(BM_SparseCode)->Arg(128)->Arg(256);

void BM_ProcrustesUpdate(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const PatchMatrix p = extract_patches(image_volume(random_image(side, side, 4)), PatchSpec{9, 9, 1});
  const CoefficientMaps z = sparse_code_layer(dct2_init(9, 9), p, 66.0);
  for (auto _ : state) {
    Eigen::MatrixXd omega = procrustes_update(p, z);
    benchmark::DoNotOptimize(omega.data());
  }
}
BENCHMARK(BM_ProcrustesUpdate)->Arg(128)->Arg(256);

void BM_TrainLayer(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const PatchMatrix p = extract_patches(image_volume(random_image(side, side, 5)), PatchSpec{9, 9, 1});
  const Eigen::MatrixXd init = dct2_init(9, 9);
  for (auto _ : state) {
    LayerTrainResult r = train_layer(p, init, 66.0, 10);
    benchmark::DoNotOptimize(r.omega.data());
  }
}
BENCHMARK(BM_TrainLayer)->Arg(128);

void BM_DenoiseSmall(benchmark::State& state) {
  const Image clean = random_image(64, 64, 6);
  const Image noisy = add_gaussian_noise(clean, 20.0, 7);
  DenoiseConfig cfg;
  cfg.sigma = 20.0;
  cfg.layers = 2;
  cfg.iters = 2;
  for (auto _ : state) {
    auto [out, rep] = denoise_single_pass(noisy, cfg);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_DenoiseSmall);

}  // namespace

BENCHMARK_MAIN();
