#include "drest/model.hpp"

#include "drest/patches.hpp"
#include "drest/transform.hpp"

#include <doctest.h>

#include <Eigen/QR>

#include <algorithm>
#include <random>

using namespace drest;

namespace {

Eigen::MatrixXd random_matrix(int rows, int cols, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = dist(rng);
  return m;
}

Eigen::MatrixXd random_unitary(int n, unsigned seed) {
  return Eigen::HouseholderQR<Eigen::MatrixXd>(random_matrix(n, n, seed)).householderQ();
}

// Model with random unitary layers, full keep, and zero thresholds: encoding
// then decoding must be the identity map.
DeepRestModel lossless_model(const std::vector<PatchSpec>& schedule, int h, int w,
                             unsigned seed) {
  DeepRestModel model;
  model.height = h;
  model.width = w;
  for (std::size_t l = 0; l < schedule.size(); ++l) {
    const int m = schedule[l].patch_len();
    LayerConfig cfg;
    cfg.patch = schedule[l];
    cfg.eta = 0.0;
    cfg.keep = m;
    TransformLayer layer;
    layer.omega = random_unitary(m, seed + static_cast<unsigned>(l));
    if (l + 1 < schedule.size()) {
      layer.retained.resize(m);
      for (int d = 0; d < m; ++d) layer.retained[d] = d;
    }
    model.configs.push_back(cfg);
    model.layers.push_back(std::move(layer));
  }
  return model;
}

}  // namespace

TEST_CASE("forward_layer computes thresholded coefficients and the residual") {
  Image img(2, 2);
  img << 1, 7,  //
      -6, 2;
  const ResidualVolume vol = ResidualVolume::from_image(img);

  TransformLayer layer;
  layer.omega = Eigen::MatrixXd::Identity(4, 4);
  LayerConfig cfg;
  cfg.patch = PatchSpec{2, 2, 1};
  cfg.eta = 5.0;

  const ForwardResult fr = forward_layer(vol, layer, cfg, /*is_last=*/false);
  // With the identity transform, T equals the patch matrix itself.
  const PatchMatrix t = extract_patches(vol, cfg.patch);
  CHECK(fr.coeffs == hard_threshold(t, 5.0));
  REQUIRE(fr.residual.has_value());
  REQUIRE(fr.residual->depth() == 4);
  const Eigen::MatrixXd resid_rows = maps_to_rows(*fr.residual);
  CHECK(resid_rows == t - fr.coeffs);
  // Entries with |x| >= eta moved into Z, so their residual is zero.
  CHECK(fr.residual->maps[0](0, 1) == 0.0);  // value 7 survives the threshold
  CHECK(fr.residual->maps[0](0, 0) == 1.0);  // value 1 does not

  const ForwardResult last = forward_layer(vol, layer, cfg, /*is_last=*/true);
  CHECK(!last.residual.has_value());
  CHECK(last.coeffs == fr.coeffs);
}

TEST_CASE("forward_layer validates depth and transform size") {
  const ResidualVolume vol(2, 3, 3);
  TransformLayer layer;
  layer.omega = Eigen::MatrixXd::Identity(4, 4);
  LayerConfig cfg;
  cfg.patch = PatchSpec{2, 2, 1};
  CHECK_THROWS_AS(forward_layer(vol, layer, cfg, true), std::invalid_argument);
  cfg.patch = PatchSpec{2, 2, 2};  // patch length 8 != 4x4 transform
  CHECK_THROWS_AS(forward_layer(vol, layer, cfg, true), std::invalid_argument);
}

TEST_CASE("downsample_residuals keeps the highest-energy maps") {
  ResidualVolume r(3, 2, 2);
  r.maps[0] << 1, 1, 1, 1;  // energy 4
  r.maps[1] << 3, 0, 0, 0;  // energy 9
  r.maps[2] << 0, 1, 0, 0;  // energy 1

  SUBCASE("keep 1 selects map 1") {
    const auto [kept, retained] = downsample_residuals(r, 1);
    CHECK(retained == std::vector<int>{1});
    REQUIRE(kept.depth() == 1);
    CHECK(kept.maps[0] == r.maps[1]);
  }
  SUBCASE("keep 2 returns ascending indices") {
    const auto [kept, retained] = downsample_residuals(r, 2);
    CHECK(retained == std::vector<int>{0, 1});
    CHECK(kept.maps[0] == r.maps[0]);
    CHECK(kept.maps[1] == r.maps[1]);
  }
  SUBCASE("keep all is the identity") {
    const auto [kept, retained] = downsample_residuals(r, 3);
    CHECK(retained == std::vector<int>{0, 1, 2});
    for (int d = 0; d < 3; ++d) CHECK(kept.maps[d] == r.maps[d]);
  }
}

TEST_CASE("downsample_residuals breaks energy ties toward the lower index") {
  ResidualVolume r(3, 1, 2);
  r.maps[0] << 2, 0;
  r.maps[1] << 0, -2;  // same energy as map 0
  r.maps[2] << 1, 0;
  const auto [kept, retained] = downsample_residuals(r, 1);
  CHECK(retained == std::vector<int>{0});
  CHECK_THROWS_AS(downsample_residuals(r, 0), std::invalid_argument);
  CHECK_THROWS_AS(downsample_residuals(r, 4), std::invalid_argument);
}

TEST_CASE("reinflate_residuals restores maps at their original indices") {
  ResidualVolume kept(2, 2, 2);
  kept.maps[0] << 1, 2, 3, 4;
  kept.maps[1] << 5, 6, 7, 8;
  const ResidualVolume full = reinflate_residuals(kept, {1, 3}, 4);
  REQUIRE(full.depth() == 4);
  CHECK(full.maps[0].isZero(0.0));
  CHECK(full.maps[1] == kept.maps[0]);
  CHECK(full.maps[2].isZero(0.0));
  CHECK(full.maps[3] == kept.maps[1]);

  CHECK_THROWS_AS(reinflate_residuals(kept, {1}, 4), std::invalid_argument);
  CHECK_THROWS_AS(reinflate_residuals(kept, {1, 4}, 4), std::invalid_argument);
}

TEST_CASE("reinflate inverts downsample on the retained maps") {
  ResidualVolume r(5, 3, 4);
  for (int d = 0; d < 5; ++d) r.maps[d] = random_matrix(3, 4, 60 + d);
  const auto [kept, retained] = downsample_residuals(r, 3);
  const ResidualVolume full = reinflate_residuals(kept, retained, 5);
  for (int d = 0; d < 5; ++d) {
    const bool is_kept = std::find(retained.begin(), retained.end(), d) != retained.end();
    if (is_kept)
      CHECK(full.maps[d] == r.maps[d]);
    else
      CHECK(full.maps[d].isZero(0.0));
  }
}

TEST_CASE("single DCT layer with zero threshold reconstructs exactly") {
  Image img(2, 2);
  img << 10, 20,  //
      30, 40;
  DeepRestModel model;
  model.height = model.width = 2;
  model.configs.push_back(LayerConfig{PatchSpec{2, 2, 1}, 0.0, 4, 1});
  model.layers.push_back(TransformLayer{dct2_init(2, 2), {}});

  const EncodedImage enc = encode(img, model);
  REQUIRE(enc.coeffs.size() == 1);
  // Z = omega * P exactly (nothing is below a zero threshold).
  CHECK((enc.coeffs[0] -
         dct2_init(2, 2) * extract_patches(ResidualVolume::from_image(img), model.configs[0].patch))
            .cwiseAbs()
            .maxCoeff() < 1e-12);
  const Image rec = decode(enc, model);
  CHECK((rec - img).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("decode inverts encode for lossless multi-layer models") {
  const Image img = 255.0 * random_matrix(8, 8, 5).cwiseAbs();
  const std::vector<std::vector<PatchSpec>> schedules = {
      {PatchSpec{3, 3, 1}},
      {PatchSpec{2, 2, 1}, PatchSpec{1, 1, 4}},
      {PatchSpec{2, 2, 1}, PatchSpec{1, 1, 4}, PatchSpec{2, 2, 4}},
  };
  for (const auto& schedule : schedules) {
    const DeepRestModel model = lossless_model(schedule, 8, 8, 900);
    const Image rec = decode(encode(img, model), model);
    CHECK((rec - img).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("encode uses the stored retained list, not a fresh energy ranking") {
  // Layer 1 keeps only map 3 by decree; whatever this image's residual
  // energies are, layer 2 must see residual map 3.
  Image img(2, 2);
  img << 9, 1,  //
      2, 8;
  DeepRestModel model;
  model.height = model.width = 2;
  model.configs.push_back(LayerConfig{PatchSpec{2, 2, 1}, 4.0, 1, 1});
  model.configs.push_back(LayerConfig{PatchSpec{1, 1, 1}, 0.0, 1, 1});
  model.layers.push_back(TransformLayer{Eigen::MatrixXd::Identity(4, 4), {3}});
  Eigen::MatrixXd one(1, 1);
  one << 1.0;
  model.layers.push_back(TransformLayer{one, {}});

  const EncodedImage enc = encode(img, model);
  const PatchMatrix t = extract_patches(ResidualVolume::from_image(img), model.configs[0].patch);
  const Eigen::MatrixXd resid = t - hard_threshold(t, 4.0);
  CHECK(enc.coeffs[1] == resid.row(3));
}

TEST_CASE("encode and decode validate their inputs") {
  const DeepRestModel model = lossless_model({PatchSpec{2, 2, 1}}, 4, 4, 77);
  CHECK_THROWS_AS(encode(random_matrix(3, 4, 1), model), std::invalid_argument);

  EncodedImage enc = encode(random_matrix(4, 4, 2), model);
  EncodedImage wrong = enc;
  wrong.coeffs[0] = Eigen::MatrixXd::Zero(4, 15);
  CHECK_THROWS_AS(decode(wrong, model), std::invalid_argument);
  wrong.coeffs.clear();
  CHECK_THROWS_AS(decode(wrong, model), std::invalid_argument);
}

TEST_CASE("encode is deterministic") {
  const Image img = random_matrix(6, 6, 8);
  const DeepRestModel model =
      lossless_model({PatchSpec{2, 2, 1}, PatchSpec{1, 1, 4}}, 6, 6, 10);
  const EncodedImage a = encode(img, model);
  const EncodedImage b = encode(img, model);
  REQUIRE(a.coeffs.size() == b.coeffs.size());
  for (std::size_t l = 0; l < a.coeffs.size(); ++l) CHECK(a.coeffs[l] == b.coeffs[l]);
}

TEST_CASE("validate_config_chain rejects every malformed chain") {
  const auto chain = [](std::vector<LayerConfig> v) { return v; };
  const LayerConfig good1{PatchSpec{2, 2, 1}, 1.0, 4, 1};
  const LayerConfig good2{PatchSpec{1, 1, 4}, 1.0, 4, 1};

  CHECK_NOTHROW(validate_config_chain(chain({good1, good2})));
  CHECK_THROWS_AS(validate_config_chain({}), std::invalid_argument);

  LayerConfig bad = good1;
  bad.patch.depth = 2;  // first layer must consume a flat image
  CHECK_THROWS_AS(validate_config_chain(chain({bad, good2})), std::invalid_argument);

  bad = good1;
  bad.keep = 5;  // more than rows*cols*depth = 4
  CHECK_THROWS_AS(validate_config_chain(chain({bad, good2})), std::invalid_argument);
  bad.keep = 0;
  CHECK_THROWS_AS(validate_config_chain(chain({bad, good2})), std::invalid_argument);

  bad = good1;
  bad.keep = 3;  // next layer consumes depth 4, not 3
  CHECK_THROWS_AS(validate_config_chain(chain({bad, good2})), std::invalid_argument);

  bad = good1;
  bad.eta = -0.1;
  CHECK_THROWS_AS(validate_config_chain(chain({bad})), std::invalid_argument);

  bad = good1;
  bad.iters = 0;
  CHECK_THROWS_AS(validate_config_chain(chain({bad})), std::invalid_argument);
}
