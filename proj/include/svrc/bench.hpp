#pragma once

#include <string>
#include <vector>

#include "svrc/codec.hpp"
#include "svrc/metrics.hpp"

namespace svrc {

/// Rate-distortion sweep configuration. An empty scale ladder is replaced by
/// 8 geometric points (ratio sqrt 2) anchored, per method, at the probed
/// scale whose rate lands nearest 0.6 bpp on the first corpus image.
struct SweepConfig {
  std::vector<std::string> image_paths;
  std::vector<MethodId> methods = {MethodId::kRki1, MethodId::kCsfSvr, MethodId::kNlSvr,
                                   MethodId::kJpegBaseline};
  std::vector<double> scales;
  std::vector<double> sigmas = {0.025, 0.05, 0.1, 0.2};
  std::vector<double> eps0s = {0.02, 0.05};
  std::vector<int> jpeg_qualities = {3, 5, 8, 12, 18, 27, 40, 60};
  int quant_bits = 5;
  NormParams params = NormParams::defaults();
  std::string csv_path;        // selected rows; averages go to csv_path + ".avg.csv"
  bool full_grid_dump = false; // every grid point to csv_path + ".grid.csv"
};

/// One selected operating point. For the JPEG baseline, `scale` carries the
/// quality setting and eps0/sigma/sv_count are zero.
struct RdRow {
  std::string image_id;
  MethodId method = MethodId::kNlSvr;
  double eps0 = 0.0;
  double scale = 0.0;
  double sigma = 0.0;
  double bpp = 0.0;
  double rmse = 0.0;
  double mpe = 0.0;
  double ssim = 0.0;
  std::size_t sv_count = 0;
  double encode_ms = 0.0;
};

struct AvgRow {
  MethodId method = MethodId::kNlSvr;
  double scale = 0.0;
  double bpp = 0.0;
  double rmse = 0.0;
  double mpe = 0.0;
  double ssim = 0.0;
};

/// Encodes every (image, method, scale) over the (eps0, sigma) grids, keeps
/// the grid point with the best SSIM, and writes the CSV outputs configured
/// in cfg. Rows are ordered by image, method, scale.
std::vector<RdRow> run_sweep(const SweepConfig& cfg);

/// Arithmetic per-method mean over images at each ladder point. Throws
/// RaggedData when the images do not share a ladder.
std::vector<AvgRow> average_curves(const std::vector<RdRow>& rows);

struct SupportVectorRow {
  int block_x = 0;  // block column
  int block_y = 0;  // block row
  int coeff_i = 0;  // vertical frequency index
  int coeff_j = 0;  // horizontal frequency index
  double weight = 0.0;  // dequantized transmitted weight
};

/// All transmitted support vectors of a single-image encode, one row each.
std::vector<SupportVectorRow> dump_support_vectors(const GrayImage& img,
                                                   const EncodeSettings& settings,
                                                   const NormParams& params);

void write_rows_csv(const std::vector<RdRow>& rows, const std::string& path);
void write_avg_csv(const std::vector<AvgRow>& rows, const std::string& path);
void write_support_csv(const std::vector<SupportVectorRow>& rows, const std::string& path);

}  // namespace svrc
