#include "svrc/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include "svrc/jpeg_baseline.hpp"
#include "svrc/pgm.hpp"
#include "svrc/quantize.hpp"

namespace svrc {
namespace {

std::string basename_no_ext(const std::string& path) {
  auto slash = path.find_last_of("/\\");
  std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
  auto dot = name.find_last_of('.');
  return dot == std::string::npos ? name : name.substr(0, dot);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

struct EncodedPoint {
  RdRow row;
  std::vector<std::uint8_t> bytes;
};

EncodedPoint encode_and_score(const GrayImage& img, const std::string& id,
                              const EncodeSettings& settings, const NormParams& params) {
  EncodedPoint pt;
  auto t0 = std::chrono::steady_clock::now();
  Bitstream bits = encode_image(img, settings, params);
  pt.bytes = serialize(bits);
  auto t1 = std::chrono::steady_clock::now();

  GrayImage dec = decode_image(parse(pt.bytes, params), params);
  QualityReport q = quality_report(img, dec, params, pt.bytes.size());

  pt.row.image_id = id;
  pt.row.method = settings.method;
  pt.row.eps0 = settings.eps0;
  pt.row.scale = settings.scale;
  pt.row.sigma = settings.sigma;
  pt.row.bpp = q.bpp;
  pt.row.rmse = q.rmse;
  pt.row.mpe = q.mpe;
  pt.row.ssim = q.ssim;
  pt.row.sv_count = bits.support_vector_count();
  pt.row.encode_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return pt;
}

RdRow score_jpeg(const GrayImage& img, const std::string& id, int quality, const NormParams& params) {
  auto t0 = std::chrono::steady_clock::now();
  JpegResult res = jpeg_baseline(img, quality);
  auto t1 = std::chrono::steady_clock::now();
  QualityReport q = quality_report(img, res.decoded, params, res.byte_size);
  RdRow row;
  row.image_id = id;
  row.method = MethodId::kJpegBaseline;
  row.scale = quality;
  row.bpp = q.bpp;
  row.rmse = q.rmse;
  row.mpe = q.mpe;
  row.ssim = q.ssim;
  row.encode_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return row;
}

// Probes coarse scales on one image and returns the 8-point sqrt(2) ladder
// anchored at the probe whose rate is nearest 0.6 bpp.
std::vector<double> auto_ladder(const GrayImage& first, const SweepConfig& cfg, MethodId method) {
  EncodeSettings s;
  s.method = method;
  s.eps0 = median(cfg.eps0s);
  s.sigma = median(cfg.sigmas);
  s.quant_bits = cfg.quant_bits;

  double best_scale = 1.0, best_gap = 1e30;
  for (double probe : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
    s.scale = probe;
    auto bytes = encode_to_bytes(first, s, cfg.params);
    double gap = std::abs(bits_per_pixel(bytes.size(), first) - 0.6);
    if (gap < best_gap) {
      best_gap = gap;
      best_scale = probe;
    }
  }
  std::vector<double> ladder(8);
  for (int k = 0; k < 8; ++k) ladder[k] = best_scale * std::pow(std::sqrt(2.0), k);
  return ladder;
}

}  // namespace

std::vector<RdRow> run_sweep(const SweepConfig& cfg) {
  if (cfg.image_paths.empty() || cfg.methods.empty())
    fail(ErrorCode::InvalidArgument, "sweep needs images and methods");

  std::vector<GrayImage> images;
  std::vector<std::string> ids;
  for (const auto& path : cfg.image_paths) {
    try {
      images.push_back(load_pgm_file(path));
    } catch (const Error& e) {
      fail(e.code(), path + ": " + e.what());
    }
    ids.push_back(basename_no_ext(path));
  }

  std::map<MethodId, std::vector<double>> ladders;
  for (MethodId m : cfg.methods) {
    if (m == MethodId::kJpegBaseline) continue;
    ladders[m] = cfg.scales.empty() ? auto_ladder(images[0], cfg, m) : cfg.scales;
  }

  std::vector<RdRow> selected;
  std::vector<RdRow> grid_rows;
  for (std::size_t im = 0; im < images.size(); ++im) {
    for (MethodId method : cfg.methods) {
      if (method == MethodId::kJpegBaseline) {
        for (int quality : cfg.jpeg_qualities)
          selected.push_back(score_jpeg(images[im], ids[im], quality, cfg.params));
        continue;
      }
      for (double scale : ladders[method]) {
        bool have = false;
        RdRow best;
        for (double eps0 : cfg.eps0s) {
          for (double sigma : cfg.sigmas) {
            EncodeSettings s;
            s.method = method;
            s.eps0 = eps0;
            s.scale = scale;
            s.sigma = sigma;
            s.quant_bits = cfg.quant_bits;
            RdRow row;
            try {
              row = encode_and_score(images[im], ids[im], s, cfg.params).row;
            } catch (const Error& e) {
              fail(e.code(), ids[im] + " " + std::string(method_name(method)) + " scale " +
                                 fmt(scale) + ": " + e.what());
            }
            if (cfg.full_grid_dump) grid_rows.push_back(row);
            if (!have || row.ssim > best.ssim) {
              best = row;
              have = true;
            }
          }
        }
        selected.push_back(best);
      }
    }
  }

  if (!cfg.csv_path.empty()) {
    write_rows_csv(selected, cfg.csv_path);
    write_avg_csv(average_curves(selected), cfg.csv_path + ".avg.csv");
    if (cfg.full_grid_dump) write_rows_csv(grid_rows, cfg.csv_path + ".grid.csv");
  }
  return selected;
}

std::vector<AvgRow> average_curves(const std::vector<RdRow>& rows) {
  // method -> image -> ordered scales, to verify the ladder is shared
  std::map<MethodId, std::map<std::string, std::vector<double>>> ladder_check;
  for (const auto& r : rows) ladder_check[r.method][r.image_id].push_back(r.scale);
  for (auto& [method, by_image] : ladder_check) {
    const std::vector<double>* ref = nullptr;
    for (auto& [id, scales] : by_image) {
      std::sort(scales.begin(), scales.end());
      if (!ref) ref = &scales;
      else if (*ref != scales)
        fail(ErrorCode::RaggedData, std::string("image '") + id + "' has a different " +
                                        method_name(method) + " ladder");
    }
  }

  std::map<std::pair<MethodId, double>, std::vector<const RdRow*>> groups;
  for (const auto& r : rows) groups[{r.method, r.scale}].push_back(&r);

  std::vector<AvgRow> out;
  for (const auto& [key, members] : groups) {
    AvgRow avg;
    avg.method = key.first;
    avg.scale = key.second;
    for (const RdRow* r : members) {
      avg.bpp += r->bpp;
      avg.rmse += r->rmse;
      avg.mpe += r->mpe;
      avg.ssim += r->ssim;
    }
    double n = static_cast<double>(members.size());
    avg.bpp /= n;
    avg.rmse /= n;
    avg.mpe /= n;
    avg.ssim /= n;
    out.push_back(avg);
  }
  return out;
}

std::vector<SupportVectorRow> dump_support_vectors(const GrayImage& img,
                                                   const EncodeSettings& settings,
                                                   const NormParams& params) {
  Bitstream bits = encode_image(img, settings, params);
  const int cols = (bits.width + kBlockSize - 1) / kBlockSize;

  std::vector<SupportVectorRow> rows;
  for (std::size_t b = 0; b < bits.blocks.size(); ++b) {
    const auto& rec = bits.blocks[b];
    QuantizerSpec q{bits.quant_bits, rec.w_max()};
    std::vector<double> w = dequantize_weights(rec.weight_symbols, q);
    for (std::size_t k = 0; k < rec.cells.size(); ++k) {
      SupportVectorRow row;
      row.block_x = static_cast<int>(b) % cols;
      row.block_y = static_cast<int>(b) / cols;
      row.coeff_i = rec.cells[k] / kBlockSize;
      row.coeff_j = rec.cells[k] % kBlockSize;
      row.weight = w[k];
      rows.push_back(row);
    }
  }
  return rows;
}

void write_rows_csv(const std::vector<RdRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::IoError, "cannot open " + path + " for writing");
  out << "image,method,eps0,scale,sigma,bpp,rmse,mpe,ssim,sv_count,encode_ms\n";
  for (const auto& r : rows)
    out << r.image_id << ',' << method_name(r.method) << ',' << fmt(r.eps0) << ',' << fmt(r.scale)
        << ',' << fmt(r.sigma) << ',' << fmt(r.bpp) << ',' << fmt(r.rmse) << ',' << fmt(r.mpe)
        << ',' << fmt(r.ssim) << ',' << r.sv_count << ',' << fmt(r.encode_ms) << '\n';
  if (!out) fail(ErrorCode::IoError, "short write to " + path);
}

void write_avg_csv(const std::vector<AvgRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::IoError, "cannot open " + path + " for writing");
  out << "method,scale,bpp,rmse,mpe,ssim\n";
  for (const auto& r : rows)
    out << method_name(r.method) << ',' << fmt(r.scale) << ',' << fmt(r.bpp) << ',' << fmt(r.rmse)
        << ',' << fmt(r.mpe) << ',' << fmt(r.ssim) << '\n';
  if (!out) fail(ErrorCode::IoError, "short write to " + path);
}

void write_support_csv(const std::vector<SupportVectorRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::IoError, "cannot open " + path + " for writing");
  out << "block_x,block_y,coeff_i,coeff_j,weight\n";
  for (const auto& r : rows)
    out << r.block_x << ',' << r.block_y << ',' << r.coeff_i << ',' << r.coeff_j << ','
        << fmt(r.weight) << '\n';
  if (!out) fail(ErrorCode::IoError, "short write to " + path);
}

}  // namespace svrc
