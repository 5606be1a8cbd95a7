#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "svrc/bench.hpp"
#include "svrc/codec.hpp"
#include "svrc/jpeg_baseline.hpp"
#include "svrc/metrics.hpp"
#include "svrc/pgm.hpp"

namespace {

svrc::NormParams load_params(const std::string& path) {
  return path.empty() ? svrc::NormParams::defaults() : svrc::NormParams::from_file(path);
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) svrc::fail(svrc::ErrorCode::IoError, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) svrc::fail(svrc::ErrorCode::IoError, "cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) svrc::fail(svrc::ErrorCode::IoError, "short write to " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"svrc - support vector regression image codec and rate-distortion bench"};
  app.require_subcommand(1);

  std::string in_path, test_path, out_path, csv_path, params_path;
  std::string method = "nl-svr";
  double eps0 = 0.02, scale = 1.0, sigma = 0.025;
  int bits = 5;
  int quality = 50;

  auto* enc = app.add_subcommand("encode", "encode a PGM image to a .svrc bitstream");
  enc->add_option("input", in_path, "input PGM (P5) image")->required();
  enc->add_option("--out", out_path, "output .svrc path")->required();
  enc->add_option("--method", method, "rki1 | csf-svr | nl-svr");
  enc->add_option("--eps0", eps0, "base insensitivity");
  enc->add_option("--scale", scale, "rate-control factor on the thresholds");
  enc->add_option("--sigma", sigma, "RBF kernel width");
  enc->add_option("--bits", bits, "weight quantizer bits [2,8]");
  enc->add_option("--params", params_path, "normalization parameter file");

  auto* dec = app.add_subcommand("decode", "decode a .svrc bitstream to a PGM image");
  dec->add_option("input", in_path, "input .svrc bitstream")->required();
  dec->add_option("--out", out_path, "output PGM path")->required();
  dec->add_option("--params", params_path, "normalization parameter file");

  auto* met = app.add_subcommand("metrics", "quality metrics between two images");
  met->add_option("reference", in_path, "reference PGM")->required();
  met->add_option("test", test_path, "test PGM")->required();
  met->add_option("--params", params_path, "normalization parameter file");

  std::vector<std::string> sweep_images, sweep_methods = {"rki1", "csf-svr", "nl-svr", "jpeg"};
  std::vector<double> sweep_scales, sweep_sigmas, sweep_eps0s;
  std::vector<int> jpeg_qualities;
  bool full_grid = false;
  auto* swp = app.add_subcommand("sweep", "rate-distortion sweep over an image corpus");
  swp->add_option("images", sweep_images, "PGM corpus")->required();
  swp->add_option("--csv", csv_path, "output CSV (averages go to <csv>.avg.csv)")->required();
  swp->add_option("--methods", sweep_methods, "subset of rki1 csf-svr nl-svr jpeg");
  swp->add_option("--scales", sweep_scales, "explicit scale ladder (default: auto, 8 points)");
  swp->add_option("--sigmas", sweep_sigmas, "RBF width grid");
  swp->add_option("--eps0s", sweep_eps0s, "base insensitivity grid");
  swp->add_option("--jpeg-qualities", jpeg_qualities, "JPEG baseline quality ladder");
  swp->add_option("--bits", bits, "weight quantizer bits [2,8]");
  swp->add_option("--params", params_path, "normalization parameter file");
  swp->add_flag("--full-grid-dump", full_grid, "also write every grid point to <csv>.grid.csv");

  auto* dsv = app.add_subcommand("dump-sv", "dump the transmitted support vectors of one encode");
  dsv->add_option("input", in_path, "input PGM image")->required();
  dsv->add_option("--csv", csv_path, "output CSV path")->required();
  dsv->add_option("--method", method, "rki1 | csf-svr | nl-svr");
  dsv->add_option("--eps0", eps0, "base insensitivity");
  dsv->add_option("--scale", scale, "rate-control factor");
  dsv->add_option("--sigma", sigma, "RBF kernel width");
  dsv->add_option("--bits", bits, "weight quantizer bits [2,8]");
  dsv->add_option("--params", params_path, "normalization parameter file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*enc) {
      svrc::EncodeSettings s;
      s.method = svrc::method_from_name(method);
      s.eps0 = eps0;
      s.scale = scale;
      s.sigma = sigma;
      s.quant_bits = bits;
      auto params = load_params(params_path);
      auto img = svrc::load_pgm_file(in_path);
      auto bytes = svrc::encode_to_bytes(img, s, params);
      write_file(out_path, bytes);
      std::printf("%s: %zu bytes, %.4f bpp\n", out_path.c_str(), bytes.size(),
                  svrc::bits_per_pixel(bytes.size(), img));
    } else if (*dec) {
      auto params = load_params(params_path);
      auto img = svrc::decode_from_bytes(read_file(in_path), params);
      svrc::save_pgm_file(img, out_path);
      std::printf("%s: %dx%d\n", out_path.c_str(), img.width, img.height);
    } else if (*met) {
      auto params = load_params(params_path);
      auto ref = svrc::load_pgm_file(in_path);
      auto test = svrc::load_pgm_file(test_path);
      std::printf("rmse=%.6f mpe=%.6f ssim=%.6f\n", svrc::rmse(ref, test),
                  svrc::mpe(ref, test, params), svrc::ssim(ref, test));
    } else if (*swp) {
      svrc::SweepConfig cfg;
      cfg.image_paths = sweep_images;
      cfg.methods.clear();
      for (const auto& m : sweep_methods) cfg.methods.push_back(svrc::method_from_name(m));
      if (!sweep_scales.empty()) cfg.scales = sweep_scales;
      if (!sweep_sigmas.empty()) cfg.sigmas = sweep_sigmas;
      if (!sweep_eps0s.empty()) cfg.eps0s = sweep_eps0s;
      if (!jpeg_qualities.empty()) cfg.jpeg_qualities = jpeg_qualities;
      cfg.quant_bits = bits;
      cfg.params = load_params(params_path);
      cfg.csv_path = csv_path;
      cfg.full_grid_dump = full_grid;
      auto rows = svrc::run_sweep(cfg);
      std::printf("%zu rows -> %s\n", rows.size(), csv_path.c_str());
    } else if (*dsv) {
      svrc::EncodeSettings s;
      s.method = svrc::method_from_name(method);
      s.eps0 = eps0;
      s.scale = scale;
      s.sigma = sigma;
      s.quant_bits = bits;
      auto params = load_params(params_path);
      auto img = svrc::load_pgm_file(in_path);
      auto rows = svrc::dump_support_vectors(img, s, params);
      svrc::write_support_csv(rows, csv_path);
      std::printf("%zu support vectors -> %s\n", rows.size(), csv_path.c_str());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "svrc: %s\n", e.what());
    return 1;
  }
  return 0;
}
