#pragma once

#include <vector>

#include "svrc/common.hpp"

namespace svrc {

/// Uniform midrise quantizer for support-vector weights on [-w_max, w_max].
struct QuantizerSpec {
  int bits = 5;        // in [2, 8]
  double w_max = 0.0;  // largest |w| in the block

  int levels() const { return 1 << bits; }
  void validate() const;
};

/// Maps each weight to a level index in [0, 2^bits).
std::vector<int> quantize_weights(const std::vector<double>& weights, const QuantizerSpec& q);

/// Reconstruction of level indices; |dequant - w| <= w_max / 2^bits for
/// weights inside [-w_max, w_max].
std::vector<double> dequantize_weights(const std::vector<int>& symbols, const QuantizerSpec& q);

}  // namespace svrc
