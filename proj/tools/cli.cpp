#include "cli.hpp"

#include "drest/denoise.hpp"
#include "drest/learn.hpp"
#include "drest/model.hpp"
#include "drest/model_io.hpp"
#include "drest/pgm.hpp"
#include "drest/transform.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#ifndef DREST_VERSION
#define DREST_VERSION "dev"
#endif

namespace drest::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open for hashing");
  std::uint64_t h = 14695981039346656037ull;
  char buf[65536];
  for (;;) {
    in.read(buf, sizeof buf);
    const std::streamsize n = in.gcount();
    if (n <= 0) break;
    for (std::streamsize i = 0; i < n; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
  }
  return h;
}

namespace {

std::string to_hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string spec_str(const PatchSpec& p) {
  return std::to_string(p.rows) + "x" + std::to_string(p.cols) + "x" + std::to_string(p.depth);
}

PatchSpec parse_patch(const std::string& s) {
  const auto sep = s.find('x');
  try {
    if (sep == std::string::npos || sep == 0 || sep + 1 >= s.size()) throw std::invalid_argument(s);
    const std::string a = s.substr(0, sep), b = s.substr(sep + 1);
    std::size_t ua = 0, ub = 0;
    const int rows = std::stoi(a, &ua), cols = std::stoi(b, &ub);
    if (ua != a.size() || ub != b.size() || rows < 1 || cols < 1) throw std::invalid_argument(s);
    return PatchSpec{rows, cols, 1};
  } catch (const std::exception&) {
    throw std::invalid_argument("--patch expects AxB (e.g. 9x9), got '" + s + "'");
  }
}

/// Splits a comma-separated numeric list; `flag` names the option in errors.
template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& flag, const std::string& s, Parse parse,
                          const char* kind) {
  std::vector<T> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    try {
      out.push_back(parse(tok, &used));
    } catch (const std::exception&) {
      used = std::string::npos;
    }
    if (used != tok.size())
      throw std::invalid_argument(flag + " expects comma-separated " + kind + ", got '" + s + "'");
  }
  if (out.empty())
    throw std::invalid_argument(flag + " expects comma-separated " + kind + ", got '" + s + "'");
  return out;
}

std::vector<int> parse_int_list(const std::string& flag, const std::string& s) {
  return parse_list<int>(
      flag, s, [](const std::string& t, std::size_t* used) { return std::stoi(t, used); },
      "integers");
}

std::vector<double> parse_double_list(const std::string& flag, const std::string& s) {
  return parse_list<double>(
      flag, s, [](const std::string& t, std::size_t* used) { return std::stod(t, used); },
      "numbers");
}

/// Options shared by train and denoise.
struct CommonOpts {
  double sigma = 20.0;
  int layers = 3;
  int iters = 100;
  std::string patch;          ///< layer-1 patch shape override, "AxB"
  std::string keep_schedule;  ///< depths of layers 2..L (= keep counts of layers 1..L-1)
  double eta_mult1 = 3.3;
  double eta_mult2 = 3.1;
  std::string out_dir = ".";
  bool json_stdout = false;
};

void add_common(CLI::App* sub, CommonOpts& o) {
  sub->add_option("--sigma", o.sigma, "noise standard deviation")->check(CLI::NonNegativeNumber);
  sub->add_option("--layers", o.layers, "model depth")->check(CLI::PositiveNumber);
  sub->add_option("--iters", o.iters, "training alternations per layer")
      ->check(CLI::PositiveNumber);
  sub->add_option("--patch", o.patch, "layer-1 patch shape AxB (default 9x9)");
  sub->add_option("--keep-schedule", o.keep_schedule,
                  "comma-separated depths of layers 2..L, overriding the default schedule");
  sub->add_option("--eta-mult1", o.eta_mult1, "layer-1 threshold multiplier");
  sub->add_option("--eta-mult2", o.eta_mult2, "threshold multiplier for layers >= 2");
  sub->add_option("--out-dir", o.out_dir, "directory for all written artifacts");
  sub->add_flag("--json", o.json_stdout, "also print the report JSON on stdout");
}

DenoiseConfig to_config(const CommonOpts& o) {
  DenoiseConfig cfg;
  cfg.sigma = o.sigma;
  cfg.layers = o.layers;
  cfg.iters = o.iters;
  cfg.eta_mult_first = o.eta_mult1;
  cfg.eta_mult_rest = o.eta_mult2;
  if (!o.keep_schedule.empty()) {
    const std::vector<int> keeps = parse_int_list("--keep-schedule", o.keep_schedule);
    if (static_cast<int>(keeps.size()) != o.layers - 1)
      throw std::invalid_argument("--keep-schedule needs exactly layers-1 = " +
                                  std::to_string(o.layers - 1) + " entries");
    cfg.schedule.push_back(PatchSpec{9, 9, 1});
    for (int k : keeps) cfg.schedule.push_back(PatchSpec{1, 1, k});
  } else {
    cfg.schedule = default_layer_schedule(o.layers, o.sigma);
  }
  if (!o.patch.empty()) cfg.schedule.front() = parse_patch(o.patch);
  return cfg;
}

json config_json(const DenoiseConfig& cfg) {
  json sched = json::array();
  for (const PatchSpec& p : cfg.schedule) sched.push_back(spec_str(p));
  return json{{"sigma", cfg.sigma},
              {"layers", cfg.layers},
              {"iters", cfg.iters},
              {"schedule", std::move(sched)},
              {"eta_mult_first", cfg.eta_mult_first},
              {"eta_mult_rest", cfg.eta_mult_rest},
              {"pass_sigmas", cfg.pass_sigmas},
              {"seed", cfg.seed}};
}

json train_report_json(const TrainReport& tr, const std::vector<LayerConfig>& configs) {
  json layers = json::array();
  for (std::size_t l = 0; l < tr.layers.size(); ++l) {
    const LayerReport& lr = tr.layers[l];
    layers.push_back(json{{"patch", spec_str(configs[l].patch)},
                          {"eta", configs[l].eta},
                          {"keep", configs[l].keep},
                          {"iters", configs[l].iters},
                          {"cost_first", lr.costs.front()},
                          {"cost_last", lr.costs.back()},
                          {"sparsity", lr.sparsity},
                          {"retained", lr.retained},
                          {"seconds", lr.seconds},
                          {"costs", lr.costs}});
  }
  return json{{"layers", std::move(layers)}};
}

void write_json_file(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error(path + ": write failed");
}

void write_manifest(const std::string& out_dir, const std::string& command,
                    const std::vector<std::string>& argv_vec, const json& config,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs) {
  json jin = json::array();
  for (const std::string& p : inputs)
    jin.push_back(json{{"path", p}, {"fnv1a64", to_hex(fnv1a64_file(p))}});
  const json manifest{{"command", command}, {"argv", argv_vec},   {"version", DREST_VERSION},
                      {"config", config},   {"inputs", std::move(jin)}, {"outputs", outputs}};
  write_json_file(manifest, (fs::path(out_dir) / (command + "_manifest.json")).string());
}

int cmd_train(const CommonOpts& o, const std::string& input,
              const std::vector<std::string>& argv_vec) {
  const DenoiseConfig cfg = to_config(o);
  const std::vector<LayerConfig> configs = make_layer_configs(cfg, cfg.sigma);
  const Image img = load_image(input);
  fs::create_directories(o.out_dir);

  const TrainResult tr = train_model(img, configs);

  std::vector<std::string> outputs;
  const std::string model_path = (fs::path(o.out_dir) / "model.bin").string();
  save_model(tr.model, model_path);
  outputs.push_back(model_path);
  for (std::size_t l = 0; l < tr.model.layers.size(); ++l) {
    const std::string p =
        (fs::path(o.out_dir) / ("atoms_layer" + std::to_string(l + 1) + ".pgm")).string();
    save_image(atom_montage(tr.model.layers[l].omega, configs[l].patch), p);
    outputs.push_back(p);
  }
  const json report = train_report_json(tr.report, configs);
  const std::string report_path = (fs::path(o.out_dir) / "train_report.json").string();
  write_json_file(report, report_path);
  outputs.push_back(report_path);
  write_manifest(o.out_dir, "train", argv_vec, config_json(cfg), {input}, outputs);

  for (std::size_t l = 0; l < tr.report.layers.size(); ++l) {
    const LayerReport& lr = tr.report.layers[l];
    std::printf("layer %zu (%s, eta %.4g): cost %.6g -> %.6g, nonzeros %.2f%%, %.1fs\n", l + 1,
                spec_str(configs[l].patch).c_str(), configs[l].eta, lr.costs.front(),
                lr.costs.back(), 100.0 * lr.sparsity, lr.seconds);
  }
  if (o.json_stdout) std::cout << report.dump(2) << "\n";
  return 0;
}

int cmd_encode(const std::string& model_path, const std::string& input, std::string out,
               const std::string& out_dir, const std::vector<std::string>& argv_vec) {
  const DeepRestModel model = load_model(model_path);
  const Image img = load_image(input);
  fs::create_directories(out_dir);
  if (out.empty()) out = (fs::path(out_dir) / "codes.bin").string();

  const EncodedImage enc = encode(img, model);
  save_encoded(enc, out);
  write_manifest(out_dir, "encode", argv_vec, json{{"model", model_path}}, {model_path, input},
                 {out});

  for (std::size_t l = 0; l < enc.coeffs.size(); ++l)
    std::printf("layer %zu: %lld nonzeros of %lld\n", l + 1,
                static_cast<long long>(nnz(enc.coeffs[l])),
                static_cast<long long>(enc.coeffs[l].size()));
  return 0;
}

int cmd_decode(const std::string& model_path, const std::string& codes_path, std::string out,
               const std::string& out_dir, const std::vector<std::string>& argv_vec) {
  const DeepRestModel model = load_model(model_path);
  const EncodedImage enc = load_encoded(codes_path);
  fs::create_directories(out_dir);
  if (out.empty()) out = (fs::path(out_dir) / "decoded.pgm").string();

  save_image(decode(enc, model), out);
  write_manifest(out_dir, "decode", argv_vec, json{{"model", model_path}},
                 {model_path, codes_path}, {out});
  std::printf("wrote %s\n", out.c_str());
  return 0;
}

std::vector<double> resolve_pass_sigmas(bool passes_given, int passes,
                                        const std::vector<double>& given, double sigma) {
  if (!given.empty()) {
    if (passes_given && passes != static_cast<int>(given.size()))
      throw std::invalid_argument("--passes disagrees with the --pass-sigmas length");
    return given;
  }
  if (passes <= 1) return {sigma};
  if (passes == 2 && sigma == 100.0) return {90.0, 20.0};
  throw std::invalid_argument("--pass-sigmas is required for " + std::to_string(passes) +
                              " passes at sigma " + std::to_string(sigma) +
                              " (a default exists only for 2 passes at sigma 100)");
}

int cmd_denoise(const CommonOpts& o, bool passes_given, int passes,
                const std::vector<double>& pass_sigmas, std::uint64_t seed,
                const std::string& input, const std::vector<std::string>& argv_vec) {
  DenoiseConfig cfg = to_config(o);
  cfg.seed = seed;
  cfg.pass_sigmas = resolve_pass_sigmas(passes_given, passes, pass_sigmas, o.sigma);
  for (double s : cfg.pass_sigmas) make_layer_configs(cfg, s);  // fail fast on bad schedules

  const Image clean = load_image(input);
  const Image noisy = add_gaussian_noise(clean, cfg.sigma, seed);
  fs::create_directories(o.out_dir);

  const auto [denoised, rep] = denoise_multipass(noisy, cfg, &clean);

  const std::string noisy_path = (fs::path(o.out_dir) / "noisy.pgm").string();
  const std::string out_path = (fs::path(o.out_dir) / "denoised.pgm").string();
  save_image(noisy, noisy_path);
  save_image(denoised, out_path);

  json report{{"config", config_json(cfg)},
              {"psnr_noisy", rep.input_psnr},
              {"psnr_passes", rep.pass_psnr},
              {"psnr", rep.pass_psnr.back()},
              {"seconds", rep.seconds}};
  json passes_json = json::array();
  for (std::size_t p = 0; p < rep.passes.size(); ++p)
    passes_json.push_back(
        train_report_json(rep.passes[p], make_layer_configs(cfg, cfg.pass_sigmas[p])));
  report["passes"] = std::move(passes_json);
  const std::string report_path = (fs::path(o.out_dir) / "report.json").string();
  write_json_file(report, report_path);
  write_manifest(o.out_dir, "denoise", argv_vec, config_json(cfg), {input},
                 {noisy_path, out_path, report_path});

  std::printf("noisy: %.4f dB\n", rep.input_psnr);
  for (std::size_t p = 0; p < rep.pass_psnr.size(); ++p)
    std::printf("pass %zu: %.4f dB\n", p + 1, rep.pass_psnr[p]);
  if (o.json_stdout) std::cout << report.dump(2) << "\n";
  return 0;
}

int cmd_psnr(const std::string& ref_path, const std::string& test_path) {
  const double v = psnr(load_image(ref_path), load_image(test_path));
  if (std::isinf(v))
    std::printf("inf\n");
  else
    std::printf("%.6f\n", v);
  return 0;
}

int cmd_table(const std::vector<std::string>& images, const std::vector<double>& sigmas,
              const std::vector<int>& layer_counts, int iters, std::uint64_t seed,
              const std::string& out_dir, bool json_stdout,
              const std::vector<std::string>& argv_vec) {
  if (images.empty() || sigmas.empty() || layer_counts.empty())
    throw std::invalid_argument("table: needs at least one image, sigma, and layer count");
  fs::create_directories(out_dir);

  json cells = json::array();
  std::string text;
  char line[256];
  std::snprintf(line, sizeof line, "%-16s %6s", "image", "sigma");
  text += line;
  for (int L : layer_counts) {
    std::snprintf(line, sizeof line, "  L=%-5d", L);
    text += line;
  }
  text += "\n";

  int cell_index = 0;
  for (const std::string& path : images) {
    const Image clean = load_image(path);
    const std::string name = fs::path(path).stem().string();
    for (double sigma : sigmas) {
      std::snprintf(line, sizeof line, "%-16s %6g", name.c_str(), sigma);
      text += line;
      for (int L : layer_counts) {
        const std::uint64_t cell_seed = seed + static_cast<std::uint64_t>(cell_index);
        DenoiseConfig cfg;
        cfg.sigma = sigma;
        cfg.layers = L;
        cfg.iters = iters;
        cfg.schedule = default_layer_schedule(L, sigma);
        cfg.seed = cell_seed;

        const Image noisy = add_gaussian_noise(clean, sigma, cell_seed);
        const auto [denoised, rep] = denoise_single_pass(noisy, cfg, &clean);
        (void)denoised;

        cells.push_back(json{{"image", name},
                             {"sigma", sigma},
                             {"layers", L},
                             {"seed", cell_seed},
                             {"psnr_noisy", rep.input_psnr},
                             {"psnr", rep.pass_psnr.back()},
                             {"seconds", rep.seconds}});
        std::snprintf(line, sizeof line, "  %7.2f", rep.pass_psnr.back());
        text += line;
        std::printf("%s sigma=%g L=%d: %.2f dB (%.0fs)\n", name.c_str(), sigma, L,
                    rep.pass_psnr.back(), rep.seconds);
        std::fflush(stdout);
        ++cell_index;
      }
      text += "\n";
    }
  }

  const json report{{"iters", iters}, {"base_seed", seed}, {"cells", std::move(cells)}};
  const std::string report_path = (fs::path(out_dir) / "table_report.json").string();
  write_json_file(report, report_path);
  const std::string text_path = (fs::path(out_dir) / "table.txt").string();
  std::ofstream tout(text_path);
  if (!tout) throw std::runtime_error(text_path + ": cannot open for writing");
  tout << text;
  tout.close();
  write_manifest(out_dir, "table", argv_vec,
                 json{{"sigmas", sigmas}, {"layers", layer_counts}, {"iters", iters},
                      {"base_seed", seed}},
                 images, {report_path, text_path});
  std::fputs(text.c_str(), stdout);
  if (json_stdout) std::cout << report.dump(2) << "\n";
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
  const std::vector<std::string> argv_vec(argv, argv + argc);
  int exit_code = 0;

  CLI::App app{"layer-wise unitary sparsifying-transform image coder and denoiser"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from an INI file");
  app.set_version_flag("--version", DREST_VERSION);

  auto* train_cmd = app.add_subcommand("train", "learn a model from one image");
  CommonOpts train_opts;
  std::string train_input;
  add_common(train_cmd, train_opts);
  train_cmd->add_option("input", train_input, "grayscale PGM to train on")->required();
  train_cmd->callback([&] { exit_code = cmd_train(train_opts, train_input, argv_vec); });

  auto* encode_cmd = app.add_subcommand("encode", "encode an image with a trained model");
  std::string en_model, en_input, en_out, en_out_dir = ".";
  encode_cmd->add_option("--model", en_model, "model container")->required();
  encode_cmd->add_option("--out", en_out, "output codes path (default <out-dir>/codes.bin)");
  encode_cmd->add_option("--out-dir", en_out_dir, "directory for written artifacts");
  encode_cmd->add_option("input", en_input, "grayscale PGM to encode")->required();
  encode_cmd->callback(
      [&] { exit_code = cmd_encode(en_model, en_input, en_out, en_out_dir, argv_vec); });

  auto* decode_cmd = app.add_subcommand("decode", "decode coefficient maps back to an image");
  std::string de_model, de_codes, de_out, de_out_dir = ".";
  decode_cmd->add_option("--model", de_model, "model container")->required();
  decode_cmd->add_option("--out", de_out, "output PGM path (default <out-dir>/decoded.pgm)");
  decode_cmd->add_option("--out-dir", de_out_dir, "directory for written artifacts");
  decode_cmd->add_option("codes", de_codes, "encoded coefficients")->required();
  decode_cmd->callback(
      [&] { exit_code = cmd_decode(de_model, de_codes, de_out, de_out_dir, argv_vec); });

  auto* denoise_cmd = app.add_subcommand("denoise", "add noise to an image, then remove it");
  CommonOpts dn_opts;
  std::string dn_input;
  std::uint64_t dn_seed = 0;
  int dn_passes = 1;
  std::string dn_pass_sigmas;
  add_common(denoise_cmd, dn_opts);
  denoise_cmd->add_option("--seed", dn_seed, "noise RNG seed");
  auto* passes_opt = denoise_cmd->add_option("--passes", dn_passes, "number of denoising passes")
                         ->check(CLI::PositiveNumber);
  denoise_cmd->add_option(
      "--pass-sigmas", dn_pass_sigmas,
      "per-pass threshold sigmas (default: sigma; 90,20 for 2 passes at sigma 100)");
  denoise_cmd->add_option("input", dn_input, "clean grayscale PGM")->required();
  denoise_cmd->callback([&] {
    const std::vector<double> sigmas =
        dn_pass_sigmas.empty() ? std::vector<double>{}
                               : parse_double_list("--pass-sigmas", dn_pass_sigmas);
    exit_code =
        cmd_denoise(dn_opts, passes_opt->count() > 0, dn_passes, sigmas, dn_seed, dn_input,
                    argv_vec);
  });

  auto* psnr_cmd = app.add_subcommand("psnr", "peak signal-to-noise ratio between two images");
  std::string ps_ref, ps_test;
  psnr_cmd->add_option("ref", ps_ref, "reference image")->required();
  psnr_cmd->add_option("test", ps_test, "image under test")->required();
  psnr_cmd->callback([&] { exit_code = cmd_psnr(ps_ref, ps_test); });

  auto* table_cmd =
      app.add_subcommand("table", "denoising PSNR grid over images x sigmas x layer counts");
  std::vector<std::string> tb_images;
  std::string tb_sigmas = "10,20,30,100";
  std::string tb_layers = "1,3,5";
  int tb_iters = 100;
  std::uint64_t tb_seed = 0;
  std::string tb_out_dir = ".";
  bool tb_json = false;
  table_cmd->add_option("--sigmas", tb_sigmas, "comma-separated noise levels");
  table_cmd->add_option("--layers", tb_layers, "comma-separated model depths");
  table_cmd->add_option("--iters", tb_iters, "training alternations per layer")
      ->check(CLI::PositiveNumber);
  table_cmd->add_option("--seed", tb_seed, "base seed; cell seeds are base + cell index");
  table_cmd->add_option("--out-dir", tb_out_dir, "directory for written artifacts");
  table_cmd->add_flag("--json", tb_json, "also print the report JSON on stdout");
  table_cmd->add_option("images", tb_images, "clean grayscale PGMs")->required();
  table_cmd->callback([&] {
    exit_code = cmd_table(tb_images, parse_double_list("--sigmas", tb_sigmas),
                          parse_int_list("--layers", tb_layers), tb_iters, tb_seed, tb_out_dir,
                          tb_json, argv_vec);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  return exit_code;
}

}  // namespace drest::cli
