#pragma once

#include "svrc/common.hpp"

namespace svrc {

/// Maps block-DCT indices to spatial frequency. The default corresponds to
/// 256-pixel images subtending 3 degrees of visual angle.
struct ViewingGeometry {
  double samples_per_degree = 256.0 / 3.0;
};

/// Spatial frequency in cycles/degree of coefficient (i,j):
/// sqrt(f_i^2 + f_j^2) with f_k = k * samples_per_degree / (2*16).
double coeff_frequency(int i, int j, const ViewingGeometry& view = {});

inline constexpr double kCsfFloor = 0.01;

/// Contrast sensitivity weight, Mannos-Sakrison form normalized to peak 1
/// (the peak sits near 8 cpd) and clamped below at `floor` so that
/// eps/alpha stays finite.
double csf_weight(double f_cpd, double floor = kCsfFloor);

}  // namespace svrc
