#include "svrc/quantize.hpp"

#include <algorithm>
#include <cmath>

namespace svrc {

void QuantizerSpec::validate() const {
  if (bits < 2 || bits > 8) fail(ErrorCode::InvalidArgument, "quantizer bits must be in [2, 8]");
  if (w_max < 0.0) fail(ErrorCode::InvalidArgument, "w_max must be nonnegative");
}

std::vector<int> quantize_weights(const std::vector<double>& weights, const QuantizerSpec& q) {
  q.validate();
  std::vector<int> out(weights.size(), 0);
  if (q.w_max == 0.0) return out;
  const int L = q.levels();
  const double step = 2.0 * q.w_max / L;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    int level = static_cast<int>(std::floor((weights[k] + q.w_max) / step));
    out[k] = std::clamp(level, 0, L - 1);
  }
  return out;
}

std::vector<double> dequantize_weights(const std::vector<int>& symbols, const QuantizerSpec& q) {
  q.validate();
  std::vector<double> out(symbols.size(), 0.0);
  if (q.w_max == 0.0) return out;
  const int L = q.levels();
  const double step = 2.0 * q.w_max / L;
  for (std::size_t k = 0; k < symbols.size(); ++k) {
    if (symbols[k] < 0 || symbols[k] >= L) fail(ErrorCode::CorruptPayload, "weight symbol out of range");
    out[k] = -q.w_max + (symbols[k] + 0.5) * step;
  }
  return out;
}

}  // namespace svrc
