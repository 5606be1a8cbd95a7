#include "svrc/range_coder.hpp"

namespace svrc {

namespace {
constexpr std::uint32_t kTop = 1u << 24;
constexpr std::uint32_t kBot = 1u << 16;
}  // namespace

void RangeEncoder::encode(std::uint32_t cum, std::uint32_t freq, std::uint32_t tot) {
  low_ += cum * (range_ /= tot);
  range_ *= freq;
  while ((low_ ^ (low_ + range_)) < kTop || (range_ < kBot && ((range_ = -low_ & (kBot - 1)), true))) {
    out_.push_back(static_cast<std::uint8_t>(low_ >> 24));
    low_ <<= 8;
    range_ <<= 8;
  }
}

std::vector<std::uint8_t> RangeEncoder::finish() {
  for (int i = 0; i < 4; ++i) {
    out_.push_back(static_cast<std::uint8_t>(low_ >> 24));
    low_ <<= 8;
  }
  return std::move(out_);
}

RangeDecoder::RangeDecoder(const std::uint8_t* begin, const std::uint8_t* end)
    : ptr_(begin), end_(end) {
  for (int i = 0; i < 4; ++i) code_ = (code_ << 8) | next_byte();
}

std::uint8_t RangeDecoder::next_byte() { return ptr_ < end_ ? *ptr_++ : 0; }

std::uint32_t RangeDecoder::decode_freq(std::uint32_t tot) {
  std::uint32_t v = (code_ - low_) / (range_ /= tot);
  return v >= tot ? tot - 1 : v;  // clamp keeps corrupt input inside the model
}

void RangeDecoder::decode_update(std::uint32_t cum, std::uint32_t freq) {
  low_ += cum * range_;
  range_ *= freq;
  while ((low_ ^ (low_ + range_)) < kTop || (range_ < kBot && ((range_ = -low_ & (kBot - 1)), true))) {
    code_ = (code_ << 8) | next_byte();
    low_ <<= 8;
    range_ <<= 8;
  }
}

AdaptiveModel::AdaptiveModel(int alphabet) : alphabet_(alphabet) {
  if (alphabet < 1 || alphabet > 257)
    fail(ErrorCode::InvalidArgument, "alphabet must be in [1, 257]");
  counts_.assign(static_cast<std::size_t>(alphabet), 0);
}

void AdaptiveModel::bump(int symbol) {
  counts_[static_cast<std::size_t>(symbol)] += kIncrement;
  total_seen_ += kIncrement;
  if (total_seen_ + 1 >= kRescaleLimit) {
    total_seen_ = 0;
    for (auto& c : counts_) {
      c = (c + 1) >> 1;
      total_seen_ += c;
    }
  }
}

void AdaptiveModel::encode(RangeEncoder& enc, int symbol) {
  if (symbol < 0 || symbol >= alphabet_)
    fail(ErrorCode::InvalidArgument, "symbol outside alphabet");
  std::uint32_t tot = total_seen_ + 1;  // +1 for the escape slot
  std::uint32_t c = counts_[static_cast<std::size_t>(symbol)];
  if (c > 0) {
    std::uint32_t cum = 0;
    for (int s = 0; s < symbol; ++s) cum += counts_[static_cast<std::size_t>(s)];
    enc.encode(cum, c, tot);
  } else {
    enc.encode(total_seen_, 1, tot);  // escape, then the symbol as a uniform literal
    enc.encode(static_cast<std::uint32_t>(symbol), 1, static_cast<std::uint32_t>(alphabet_));
  }
  bump(symbol);
}

int AdaptiveModel::decode(RangeDecoder& dec) {
  std::uint32_t tot = total_seen_ + 1;
  std::uint32_t target = dec.decode_freq(tot);
  int symbol;
  if (target >= total_seen_) {
    dec.decode_update(total_seen_, 1);
    symbol = static_cast<int>(dec.decode_freq(static_cast<std::uint32_t>(alphabet_)));
    dec.decode_update(static_cast<std::uint32_t>(symbol), 1);
    if (counts_[static_cast<std::size_t>(symbol)] != 0)
      fail(ErrorCode::CorruptPayload, "escape for an already-seen symbol");
  } else {
    std::uint32_t cum = 0;
    symbol = 0;
    while (cum + counts_[static_cast<std::size_t>(symbol)] <= target) {
      cum += counts_[static_cast<std::size_t>(symbol)];
      ++symbol;
      if (symbol >= alphabet_) fail(ErrorCode::CorruptPayload, "cumulative count overrun");
    }
    dec.decode_update(cum, counts_[static_cast<std::size_t>(symbol)]);
  }
  bump(symbol);
  return symbol;
}

std::vector<std::uint8_t> entropy_code(const std::vector<int>& symbols, int alphabet) {
  RangeEncoder enc;
  AdaptiveModel model(alphabet);
  for (int s : symbols) model.encode(enc, s);
  return enc.finish();
}

std::vector<int> entropy_decode(const std::vector<std::uint8_t>& bytes, std::size_t count, int alphabet) {
  RangeDecoder dec(bytes.data(), bytes.data() + bytes.size());
  AdaptiveModel model(alphabet);
  std::vector<int> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(model.decode(dec));
  return out;
}

}  // namespace svrc
