#include "drest/model_io.hpp"

#include "drest/transform.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>

namespace drest {

namespace {

constexpr char kModelMagic[8] = {'D', 'R', 'S', 'T', 'M', 'D', 'L', '1'};
constexpr char kEncodedMagic[8] = {'D', 'R', 'S', 'T', 'E', 'N', 'C', '1'};

// All integers and floats are written little-endian, byte by byte, so the
// files are identical across hosts.
void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 8);
}

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

std::uint32_t get_u32(std::istream& in, const std::string& path) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw std::runtime_error(path + ": truncated container");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

std::uint64_t get_u64(std::istream& in, const std::string& path) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  if (!in) throw std::runtime_error(path + ": truncated container");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& in, const std::string& path) {
  return std::bit_cast<double>(get_u64(in, path));
}

void check_magic(std::istream& in, const char (&magic)[8], const std::string& path,
                 const char* kind) {
  char buf[8];
  in.read(buf, 8);
  if (!in || !std::equal(buf, buf + 8, magic))
    throw std::runtime_error(path + ": not a " + kind +
                             " container (bad magic or unsupported version)");
}

}  // namespace

void save_model(const DeepRestModel& model, const std::string& path) {
  if (model.layers.size() != model.configs.size())
    throw std::invalid_argument("save_model: layer/config count mismatch");

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out.write(kModelMagic, 8);
  put_u32(out, static_cast<std::uint32_t>(model.layers.size()));
  put_u32(out, static_cast<std::uint32_t>(model.height));
  put_u32(out, static_cast<std::uint32_t>(model.width));

  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const LayerConfig& cfg = model.configs[l];
    const TransformLayer& layer = model.layers[l];
    put_u32(out, static_cast<std::uint32_t>(cfg.patch.rows));
    put_u32(out, static_cast<std::uint32_t>(cfg.patch.cols));
    put_u32(out, static_cast<std::uint32_t>(cfg.patch.depth));
    put_f64(out, cfg.eta);
    put_u32(out, static_cast<std::uint32_t>(cfg.keep));
    put_u32(out, static_cast<std::uint32_t>(cfg.iters));
    put_u32(out, static_cast<std::uint32_t>(layer.retained.size()));
    for (int idx : layer.retained) put_u32(out, static_cast<std::uint32_t>(idx));
    const int m = cfg.patch.patch_len();
    if (layer.omega.rows() != m || layer.omega.cols() != m)
      throw std::invalid_argument("save_model: layer " + std::to_string(l + 1) +
                                  " transform is not " + std::to_string(m) + "x" +
                                  std::to_string(m));
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) put_f64(out, layer.omega(r, c));
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

DeepRestModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open for reading");
  check_magic(in, kModelMagic, path, "model");

  DeepRestModel model;
  const std::uint32_t num_layers = get_u32(in, path);
  model.height = static_cast<int>(get_u32(in, path));
  model.width = static_cast<int>(get_u32(in, path));
  if (num_layers == 0 || model.height <= 0 || model.width <= 0)
    throw std::runtime_error(path + ": inconsistent model header");

  for (std::uint32_t l = 0; l < num_layers; ++l) {
    const std::string where = path + ": layer " + std::to_string(l + 1);
    LayerConfig cfg;
    cfg.patch.rows = static_cast<int>(get_u32(in, path));
    cfg.patch.cols = static_cast<int>(get_u32(in, path));
    cfg.patch.depth = static_cast<int>(get_u32(in, path));
    cfg.eta = get_f64(in, path);
    cfg.keep = static_cast<int>(get_u32(in, path));
    cfg.iters = static_cast<int>(get_u32(in, path));
    if (cfg.patch.rows <= 0 || cfg.patch.cols <= 0 || cfg.patch.depth <= 0)
      throw std::runtime_error(where + " has an invalid patch shape");
    const int m = cfg.patch.patch_len();

    TransformLayer layer;
    const std::uint32_t retained_count = get_u32(in, path);
    if (retained_count > static_cast<std::uint32_t>(m))
      throw std::runtime_error(where + " retains more maps than it produces");
    layer.retained.reserve(retained_count);
    for (std::uint32_t i = 0; i < retained_count; ++i) {
      const int idx = static_cast<int>(get_u32(in, path));
      if (idx >= m || (!layer.retained.empty() && idx <= layer.retained.back()))
        throw std::runtime_error(where + " retained indices not ascending in [0," +
                                 std::to_string(m) + ")");
      layer.retained.push_back(idx);
    }

    layer.omega.resize(m, m);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) layer.omega(r, c) = get_f64(in, path);

    const double err = unitarity_error(layer.omega);
    if (err > 1e-4)
      throw std::runtime_error(where + " transform violates unitarity (deviation " +
                               std::to_string(err) + ")");
    if (err > 1e-8)
      std::cerr << "warning: " << where << " transform deviates from unitarity by " << err
                << "\n";

    model.configs.push_back(cfg);
    model.layers.push_back(std::move(layer));
  }
  validate_config_chain(model.configs);
  return model;
}

void save_encoded(const EncodedImage& enc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out.write(kEncodedMagic, 8);
  put_u32(out, static_cast<std::uint32_t>(enc.coeffs.size()));

  for (const CoefficientMaps& z : enc.coeffs) {
    put_u32(out, static_cast<std::uint32_t>(z.rows()));
    put_u32(out, static_cast<std::uint32_t>(z.cols()));
    put_u64(out, static_cast<std::uint64_t>(nnz(z)));
    for (Eigen::Index c = 0; c < z.cols(); ++c)
      for (Eigen::Index r = 0; r < z.rows(); ++r)
        if (z(r, c) != 0.0) {
          put_u32(out, static_cast<std::uint32_t>(r));
          put_u32(out, static_cast<std::uint32_t>(c));
          put_f64(out, z(r, c));
        }
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

EncodedImage load_encoded(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open for reading");
  check_magic(in, kEncodedMagic, path, "coefficient");

  EncodedImage enc;
  const std::uint32_t num_layers = get_u32(in, path);
  for (std::uint32_t l = 0; l < num_layers; ++l) {
    const std::uint32_t rows = get_u32(in, path);
    const std::uint32_t cols = get_u32(in, path);
    CoefficientMaps z = CoefficientMaps::Zero(rows, cols);
    const std::uint64_t count = get_u64(in, path);
    for (std::uint64_t i = 0; i < count; ++i) {
      const std::uint32_t r = get_u32(in, path);
      const std::uint32_t c = get_u32(in, path);
      if (r >= rows || c >= cols)
        throw std::runtime_error(path + ": coefficient index out of range");
      z(r, c) = get_f64(in, path);
    }
    enc.coeffs.push_back(std::move(z));
  }
  return enc;
}

}  // namespace drest
