#include "svrc/csf.hpp"

#include <cmath>

namespace svrc {
namespace {

double csf_raw(double f) {
  return 2.6 * (0.0192 + 0.114 * f) * std::exp(-std::pow(0.114 * f, 1.1));
}

// Peak of csf_raw over [0,60] cpd, found once by golden-section search.
double csf_peak() {
  static const double peak = [] {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 0.0, b = 60.0;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    for (int it = 0; it < 200; ++it) {
      if (csf_raw(c) > csf_raw(d)) b = d; else a = c;
      c = b - gr * (b - a);
      d = a + gr * (b - a);
    }
    return csf_raw(0.5 * (a + b));
  }();
  return peak;
}

}  // namespace

double coeff_frequency(int i, int j, const ViewingGeometry& view) {
  if (i < 0 || i >= kBlockSize || j < 0 || j >= kBlockSize)
    fail(ErrorCode::InvalidArgument, "coefficient index out of range");
  double fi = i * view.samples_per_degree / (2.0 * kBlockSize);
  double fj = j * view.samples_per_degree / (2.0 * kBlockSize);
  return std::hypot(fi, fj);
}

double csf_weight(double f_cpd, double floor) {
  if (f_cpd < 0.0) fail(ErrorCode::InvalidArgument, "negative frequency");
  double w = csf_raw(f_cpd) / csf_peak();
  return w < floor ? floor : (w > 1.0 ? 1.0 : w);
}

}  // namespace svrc
