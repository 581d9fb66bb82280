#include "drest/model.hpp"

#include "drest/patches.hpp"
#include "drest/transform.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace drest {

ForwardResult forward_layer(const ResidualVolume& vol, const TransformLayer& layer,
                            const LayerConfig& cfg, bool is_last) {
  if (vol.depth() != cfg.patch.depth)
    throw std::invalid_argument("forward_layer: volume depth " + std::to_string(vol.depth()) +
                                " != patch depth " + std::to_string(cfg.patch.depth));
  const PatchMatrix p = extract_patches(vol, cfg.patch);
  if (layer.omega.rows() != p.rows())
    throw std::invalid_argument("forward_layer: transform size != patch length");
  const Eigen::MatrixXd t = layer.omega * p;
  ForwardResult out{hard_threshold(t, cfg.eta), std::nullopt};
  if (!is_last)
    out.residual = rows_to_maps(t - out.coeffs, vol.height(), vol.width());
  return out;
}

std::pair<ResidualVolume, std::vector<int>> downsample_residuals(const ResidualVolume& r,
                                                                 int keep) {
  if (keep < 1 || keep > r.depth())
    throw std::invalid_argument("downsample_residuals: keep out of range");
  std::vector<int> order(r.depth());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> energy(r.depth());
  for (int d = 0; d < r.depth(); ++d) energy[d] = r.maps[d].squaredNorm();
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return energy[a] > energy[b]; });
  std::vector<int> retained(order.begin(), order.begin() + keep);
  std::sort(retained.begin(), retained.end());

  ResidualVolume kept;
  kept.maps.reserve(retained.size());
  for (int d : retained) kept.maps.push_back(r.maps[d]);
  return {std::move(kept), std::move(retained)};
}

ResidualVolume reinflate_residuals(const ResidualVolume& kept, const std::vector<int>& retained,
                                   int full_depth) {
  if (static_cast<int>(retained.size()) != kept.depth())
    throw std::invalid_argument("reinflate_residuals: retained size != kept depth");
  ResidualVolume full(full_depth, kept.height(), kept.width());
  for (std::size_t i = 0; i < retained.size(); ++i) {
    const int d = retained[i];
    if (d < 0 || d >= full_depth)
      throw std::invalid_argument("reinflate_residuals: retained index out of range");
    full.maps[d] = kept.maps[i];
  }
  return full;
}

EncodedImage encode(const Image& img, const DeepRestModel& model) {
  if (img.rows() != model.height || img.cols() != model.width)
    throw std::invalid_argument("encode: image dimensions do not match the model");
  if (model.layers.empty() || model.layers.size() != model.configs.size())
    throw std::invalid_argument("encode: malformed model");

  EncodedImage enc;
  ResidualVolume vol = ResidualVolume::from_image(img);
  const int last = model.num_layers() - 1;
  for (int l = 0; l <= last; ++l) {
    ForwardResult fr = forward_layer(vol, model.layers[l], model.configs[l], l == last);
    enc.coeffs.push_back(std::move(fr.coeffs));
    if (l != last) {
      const ResidualVolume& r = *fr.residual;
      ResidualVolume next;
      next.maps.reserve(model.layers[l].retained.size());
      for (int d : model.layers[l].retained) {
        if (d < 0 || d >= r.depth())
          throw std::invalid_argument("encode: retained index out of range");
        next.maps.push_back(r.maps[d]);
      }
      vol = std::move(next);
    }
  }
  return enc;
}

Image decode(const EncodedImage& enc, const DeepRestModel& model) {
  const int num_layers = model.num_layers();
  if (num_layers == 0 || static_cast<int>(enc.coeffs.size()) != num_layers)
    throw std::invalid_argument("decode: layer count mismatch");
  const int h = model.height, w = model.width;
  const Eigen::Index n_pos = static_cast<Eigen::Index>(h) * w;
  for (int l = 0; l < num_layers; ++l) {
    if (enc.coeffs[l].rows() != model.layers[l].omega.rows() || enc.coeffs[l].cols() != n_pos)
      throw std::invalid_argument("decode: coefficient maps do not match the model");
  }

  // top layer: P^L = omega^T Z^L
  const LayerConfig& top = model.configs[num_layers - 1];
  PatchMatrix pm = model.layers[num_layers - 1].omega.transpose() * enc.coeffs[num_layers - 1];
  ResidualVolume vol = aggregate_patches(pm, top.patch.depth, h, w, top.patch);

  for (int j = num_layers - 2; j >= 0; --j) {
    const TransformLayer& layer = model.layers[j];
    const LayerConfig& cfg = model.configs[j];
    const int full_depth = static_cast<int>(layer.omega.rows());
    const ResidualVolume full = reinflate_residuals(vol, layer.retained, full_depth);
    pm = layer.omega.transpose() * (enc.coeffs[j] + maps_to_rows(full));
    vol = aggregate_patches(pm, cfg.patch.depth, h, w, cfg.patch);
  }
  return vol.as_image();
}

void validate_config_chain(const std::vector<LayerConfig>& configs) {
  if (configs.empty()) throw std::invalid_argument("config chain: no layers");
  if (configs[0].patch.depth != 1)
    throw std::invalid_argument("config chain: first layer patch depth must be 1");
  const int last = static_cast<int>(configs.size()) - 1;
  for (int l = 0; l <= last; ++l) {
    const LayerConfig& c = configs[l];
    if (c.patch.rows < 1 || c.patch.cols < 1 || c.patch.depth < 1)
      throw std::invalid_argument("config chain: layer " + std::to_string(l + 1) +
                                  " has a non-positive patch dimension");
    if (c.eta < 0.0)
      throw std::invalid_argument("config chain: layer " + std::to_string(l + 1) +
                                  " has a negative threshold");
    if (c.iters < 1)
      throw std::invalid_argument("config chain: layer " + std::to_string(l + 1) +
                                  " has iters < 1");
    if (l != last) {
      if (c.keep < 1 || c.keep > c.patch.patch_len())
        throw std::invalid_argument("config chain: layer " + std::to_string(l + 1) +
                                    " keep must be in [1, " +
                                    std::to_string(c.patch.patch_len()) + "]");
      if (configs[l + 1].patch.depth != c.keep)
        throw std::invalid_argument(
            "config chain: layer " + std::to_string(l + 2) + " patch depth " +
            std::to_string(configs[l + 1].patch.depth) + " != layer " + std::to_string(l + 1) +
            " keep " + std::to_string(c.keep));
    }
  }
}

}  // namespace drest
