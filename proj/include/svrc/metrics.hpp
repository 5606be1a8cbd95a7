#pragma once

#include "svrc/common.hpp"
#include "svrc/normalization.hpp"

namespace svrc {

struct QualityReport {
  double rmse = 0.0;  // gray levels
  double mpe = 0.0;   // perceptual-domain units
  double ssim = 0.0;
  double bpp = 0.0;
};

/// Root mean squared pixel difference, in gray levels.
double rmse(const GrayImage& a, const GrayImage& b);

/// Maximum Perceptual Error: both images are tiled, block-DCT'd and
/// divisively normalized; returns the largest per-block RMS difference of
/// the 256 responses.
double mpe(const GrayImage& a, const GrayImage& b, const NormParams& p);

/// Mean SSIM with the standard 11x11 Gaussian window (std 1.5),
/// C1=(0.01*255)^2, C2=(0.03*255)^2, computed over the valid interior.
/// Throws TooSmall when either dimension is below the window size.
double ssim(const GrayImage& a, const GrayImage& b);

QualityReport quality_report(const GrayImage& ref, const GrayImage& test, const NormParams& p,
                             std::size_t coded_bytes);

}  // namespace svrc
