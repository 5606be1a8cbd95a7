#pragma once

#include <cstdint>
#include <vector>

#include "svrc/common.hpp"

namespace svrc {

/// Carryless byte-oriented range coder (Subbotin style, 32-bit state).
/// Frequencies must satisfy totFreq <= 2^16.
class RangeEncoder {
 public:
  void encode(std::uint32_t cum, std::uint32_t freq, std::uint32_t tot);
  std::vector<std::uint8_t> finish();

 private:
  std::uint32_t low_ = 0;
  std::uint32_t range_ = 0xffffffffu;
  std::vector<std::uint8_t> out_;
};

class RangeDecoder {
 public:
  /// Decodes from [begin, end). Reads past-the-end as zero bytes, so corrupt
  /// or truncated payloads surface as model-level inconsistencies.
  RangeDecoder(const std::uint8_t* begin, const std::uint8_t* end);

  std::uint32_t decode_freq(std::uint32_t tot);
  void decode_update(std::uint32_t cum, std::uint32_t freq);

 private:
  std::uint8_t next_byte();

  const std::uint8_t* ptr_;
  const std::uint8_t* end_;
  std::uint32_t low_ = 0;
  std::uint32_t code_ = 0;
  std::uint32_t range_ = 0xffffffffu;
};

/// Adaptive order-0 model over `alphabet` symbols (alphabet <= 257) with an
/// escape slot for first occurrences. Symbols never seen reserve almost no
/// code space, so near-deterministic streams code at a few bytes total.
class AdaptiveModel {
 public:
  explicit AdaptiveModel(int alphabet);

  void encode(RangeEncoder& enc, int symbol);
  int decode(RangeDecoder& dec);

 private:
  void bump(int symbol);

  int alphabet_;
  std::vector<std::uint32_t> counts_;
  std::uint32_t total_seen_ = 0;

  static constexpr std::uint32_t kIncrement = 32;
  static constexpr std::uint32_t kRescaleLimit = 1u << 16;
};

/// One-shot helpers implementing the adaptive order-0 codec on a whole
/// symbol stream. decode needs the symbol count up front.
std::vector<std::uint8_t> entropy_code(const std::vector<int>& symbols, int alphabet);
std::vector<int> entropy_decode(const std::vector<std::uint8_t>& bytes, std::size_t count, int alphabet);

}  // namespace svrc
