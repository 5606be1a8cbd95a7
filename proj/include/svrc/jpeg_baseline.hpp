#pragma once

#include "svrc/common.hpp"

namespace svrc {

struct JpegResult {
  std::size_t byte_size = 0;
  GrayImage decoded;
};

/// JPEG-like rate/distortion baseline: 8x8 block DCT, standard luminance
/// quantization table with the usual quality-factor scaling, zigzag
/// run-length symbols, range-coded. Not interchange-format compliant; the
/// byte count is the actual coded size of an equivalent self-contained
/// stream.
JpegResult jpeg_baseline(const GrayImage& img, int quality);

}  // namespace svrc
