#include "svrc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "svrc/blocks.hpp"
#include "svrc/dct.hpp"

namespace svrc {
namespace {

void check_dims(const GrayImage& a, const GrayImage& b) {
  if (a.width != b.width || a.height != b.height)
    fail(ErrorCode::DimensionMismatch, "images differ in size");
  if (a.samples.size() != a.pixel_count() || b.samples.size() != b.pixel_count())
    fail(ErrorCode::DimensionMismatch, "inconsistent image dimensions");
}

constexpr int kWin = 11;
constexpr double kWinSigma = 1.5;

const std::array<double, kWin>& gaussian_window() {
  static const std::array<double, kWin> w = [] {
    std::array<double, kWin> g{};
    double sum = 0.0;
    for (int k = 0; k < kWin; ++k) {
      double d = k - (kWin - 1) / 2.0;
      g[k] = std::exp(-d * d / (2.0 * kWinSigma * kWinSigma));
      sum += g[k];
    }
    for (auto& v : g) v /= sum;
    return g;
  }();
  return w;
}

// separable valid-region convolution with the normalized Gaussian window
std::vector<double> blur_valid(const std::vector<double>& in, int w, int h, int& ow, int& oh) {
  const auto& g = gaussian_window();
  ow = w - kWin + 1;
  oh = h - kWin + 1;
  std::vector<double> rows(static_cast<std::size_t>(ow) * h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kWin; ++k) acc += g[k] * in[static_cast<std::size_t>(y) * w + x + k];
      rows[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  std::vector<double> out(static_cast<std::size_t>(ow) * oh);
  for (int y = 0; y < oh; ++y)
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kWin; ++k) acc += g[k] * rows[static_cast<std::size_t>(y + k) * ow + x];
      out[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  return out;
}

}  // namespace

double rmse(const GrayImage& a, const GrayImage& b) {
  check_dims(a, b);
  double acc = 0.0;
  for (std::size_t k = 0; k < a.samples.size(); ++k) {
    double d = static_cast<double>(a.samples[k]) - static_cast<double>(b.samples[k]);
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(a.samples.size()));
}

double mpe(const GrayImage& a, const GrayImage& b, const NormParams& p) {
  check_dims(a, b);
  BlockGrid ga = tile_blocks(a), gb = tile_blocks(b);
  double worst = 0.0;
  for (std::size_t k = 0; k < ga.blocks.size(); ++k) {
    Block ra = normalize_forward(dct2_forward(ga.blocks[k]), p);
    Block rb = normalize_forward(dct2_forward(gb.blocks[k]), p);
    double acc = 0.0;
    for (int f = 0; f < kBlockCells; ++f) {
      double d = ra[f] - rb[f];
      acc += d * d;
    }
    worst = std::max(worst, std::sqrt(acc / kBlockCells));
  }
  return worst;
}

double ssim(const GrayImage& a, const GrayImage& b) {
  check_dims(a, b);
  if (a.width < kWin || a.height < kWin)
    fail(ErrorCode::TooSmall, "SSIM needs images at least 11x11");

  const double C1 = (0.01 * 255) * (0.01 * 255);
  const double C2 = (0.03 * 255) * (0.03 * 255);
  const int w = a.width, h = a.height;
  const std::size_t n = a.pixel_count();

  std::vector<double> fa(n), fb(n), faa(n), fbb(n), fab(n);
  for (std::size_t k = 0; k < n; ++k) {
    fa[k] = a.samples[k];
    fb[k] = b.samples[k];
    faa[k] = fa[k] * fa[k];
    fbb[k] = fb[k] * fb[k];
    fab[k] = fa[k] * fb[k];
  }
  int ow = 0, oh = 0;
  auto mu1 = blur_valid(fa, w, h, ow, oh);
  auto mu2 = blur_valid(fb, w, h, ow, oh);
  auto m11 = blur_valid(faa, w, h, ow, oh);
  auto m22 = blur_valid(fbb, w, h, ow, oh);
  auto m12 = blur_valid(fab, w, h, ow, oh);

  double acc = 0.0;
  for (std::size_t k = 0; k < mu1.size(); ++k) {
    double s11 = m11[k] - mu1[k] * mu1[k];
    double s22 = m22[k] - mu2[k] * mu2[k];
    double s12 = m12[k] - mu1[k] * mu2[k];
    double num = (2.0 * mu1[k] * mu2[k] + C1) * (2.0 * s12 + C2);
    double den = (mu1[k] * mu1[k] + mu2[k] * mu2[k] + C1) * (s11 + s22 + C2);
    acc += num / den;
  }
  return acc / static_cast<double>(mu1.size());
}

QualityReport quality_report(const GrayImage& ref, const GrayImage& test, const NormParams& p,
                             std::size_t coded_bytes) {
  QualityReport r;
  r.rmse = rmse(ref, test);
  r.mpe = mpe(ref, test, p);
  r.ssim = ssim(ref, test);
  r.bpp = static_cast<double>(coded_bytes) * 8.0 / static_cast<double>(ref.pixel_count());
  return r;
}

}  // namespace svrc
