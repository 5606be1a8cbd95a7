#include "svrc/jpeg_baseline.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "svrc/range_coder.hpp"

namespace svrc {
namespace {

constexpr int B = 8;

// Annex K luminance table, raster order.
constexpr int kLumaTable[64] = {
    16, 11, 10, 16, 24,  40,  51,  61,  12, 12, 14, 19, 26,  58,  60,  55,
    14, 13, 16, 24, 40,  57,  69,  56,  14, 17, 22, 29, 51,  87,  80,  62,
    18, 22, 37, 56, 68,  109, 103, 77,  24, 35, 55, 64, 81,  104, 113, 92,
    49, 64, 78, 87, 103, 121, 120, 101, 72, 92, 95, 98, 112, 100, 103, 99};

std::array<int, 64> scaled_table(int quality) {
  int scale = quality < 50 ? 5000 / quality : 200 - 2 * quality;
  std::array<int, 64> t{};
  for (int k = 0; k < 64; ++k)
    t[k] = std::clamp((kLumaTable[k] * scale + 50) / 100, 1, 255);
  return t;
}

const std::array<int, 64>& zigzag_order() {
  static const std::array<int, 64> order = [] {
    std::array<int, 64> o{};
    int idx = 0;
    for (int s = 0; s < 2 * B - 1; ++s) {
      if (s % 2 == 0) {
        for (int i = std::min(s, B - 1); i >= std::max(0, s - B + 1); --i) o[idx++] = i * B + (s - i);
      } else {
        for (int i = std::max(0, s - B + 1); i <= std::min(s, B - 1); ++i) o[idx++] = i * B + (s - i);
      }
    }
    return o;
  }();
  return order;
}

struct Basis8 {
  double c[B][B];
  Basis8() {
    const double pi = std::acos(-1.0);
    for (int k = 0; k < B; ++k) {
      double s = std::sqrt((k == 0 ? 1.0 : 2.0) / B);
      for (int x = 0; x < B; ++x) c[k][x] = s * std::cos(pi * (2 * x + 1) * k / (2.0 * B));
    }
  }
};

const Basis8& basis8() {
  static const Basis8 b;
  return b;
}

void dct8(const double in[B][B], double out[B][B]) {
  const auto& C = basis8().c;
  double tmp[B][B];
  for (int i = 0; i < B; ++i)
    for (int k = 0; k < B; ++k) {
      double acc = 0;
      for (int x = 0; x < B; ++x) acc += in[i][x] * C[k][x];
      tmp[i][k] = acc;
    }
  for (int k = 0; k < B; ++k)
    for (int j = 0; j < B; ++j) {
      double acc = 0;
      for (int y = 0; y < B; ++y) acc += C[k][y] * tmp[y][j];
      out[k][j] = acc;
    }
}

void idct8(const double in[B][B], double out[B][B]) {
  const auto& C = basis8().c;
  double tmp[B][B];
  for (int x = 0; x < B; ++x)
    for (int j = 0; j < B; ++j) {
      double acc = 0;
      for (int k = 0; k < B; ++k) acc += C[k][x] * in[k][j];
      tmp[x][j] = acc;
    }
  for (int x = 0; x < B; ++x)
    for (int y = 0; y < B; ++y) {
      double acc = 0;
      for (int k = 0; k < B; ++k) acc += tmp[x][k] * C[k][y];
      out[x][y] = acc;
    }
}

int category_of(int v) {
  int a = std::abs(v), c = 0;
  while (a) {
    ++c;
    a >>= 1;
  }
  return c;
}

// JPEG magnitude coding: v > 0 sends v itself, v < 0 sends v + 2^c - 1.
int magnitude_bits(int v, int c) { return v > 0 ? v : v + (1 << c) - 1; }

int magnitude_value(int bits, int c) {
  if (c == 0) return 0;
  return bits < (1 << (c - 1)) ? bits - (1 << c) + 1 : bits;
}

constexpr int kEob = 64;  // end-of-block symbol in the run stream

}  // namespace

JpegResult jpeg_baseline(const GrayImage& img, int quality) {
  if (quality < 1 || quality > 100) fail(ErrorCode::InvalidArgument, "quality must be in [1, 100]");
  if (img.width < 1 || img.height < 1 || img.samples.size() != img.pixel_count())
    fail(ErrorCode::DimensionMismatch, "inconsistent image dimensions");

  const auto table = scaled_table(quality);
  const auto& zz = zigzag_order();
  const int bw = (img.width + B - 1) / B, bh = (img.height + B - 1) / B;

  std::vector<int> dc_cat, dc_bits_stream, ac_run, ac_cat, ac_bits_stream;

  auto push_bits = [](std::vector<int>& stream, int bits, int c) {
    for (int k = c - 1; k >= 0; --k) stream.push_back((bits >> k) & 1);
  };

  int prev_dc = 0;
  for (int by = 0; by < bh; ++by) {
    for (int bx = 0; bx < bw; ++bx) {
      double in[B][B], out[B][B];
      for (int i = 0; i < B; ++i)
        for (int j = 0; j < B; ++j) {
          int y = std::min(by * B + i, img.height - 1);
          int x = std::min(bx * B + j, img.width - 1);
          in[i][j] = img.at(y, x) - 128.0;
        }
      dct8(in, out);
      std::array<int, 64> q{};
      for (int k = 0; k < 64; ++k)
        q[k] = static_cast<int>(std::lround(out[zz[k] / B][zz[k] % B] / table[zz[k]]));

      int diff = q[0] - prev_dc;
      prev_dc = q[0];
      int c = category_of(diff);
      dc_cat.push_back(c);
      push_bits(dc_bits_stream, magnitude_bits(diff, c), c);

      int run = 0;
      for (int k = 1; k < 64; ++k) {
        if (q[k] == 0) {
          ++run;
          continue;
        }
        ac_run.push_back(run);
        run = 0;
        int cc = category_of(q[k]);
        ac_cat.push_back(cc);
        push_bits(ac_bits_stream, magnitude_bits(q[k], cc), cc);
      }
      ac_run.push_back(kEob);
    }
  }

  // self-contained stream: tiny header + directory + coded payload
  std::size_t byte_size = 2 + 2 + 1;  // width, height, quality
  byte_size += 5 * 4;                 // per-stream symbol counts
  std::vector<std::uint8_t> payload;
  {
    RangeEncoder enc;
    AdaptiveModel m_dc_cat(13), m_dc_bits(2), m_run(65), m_ac_cat(13), m_ac_bits(2);
    for (int v : dc_cat) m_dc_cat.encode(enc, v);
    for (int v : dc_bits_stream) m_dc_bits.encode(enc, v);
    for (int v : ac_run) m_run.encode(enc, v);
    for (int v : ac_cat) m_ac_cat.encode(enc, v);
    for (int v : ac_bits_stream) m_ac_bits.encode(enc, v);
    payload = enc.finish();
  }
  byte_size += payload.size();

  // decode back through the coded payload
  std::vector<int> d_dc_cat(dc_cat.size()), d_dc_bits(dc_bits_stream.size()), d_run(ac_run.size()),
      d_ac_cat(ac_cat.size()), d_ac_bits(ac_bits_stream.size());
  {
    RangeDecoder rdec(payload.data(), payload.data() + payload.size());
    AdaptiveModel m_dc_cat(13), m_dc_bits(2), m_run(65), m_ac_cat(13), m_ac_bits(2);
    for (auto& v : d_dc_cat) v = m_dc_cat.decode(rdec);
    for (auto& v : d_dc_bits) v = m_dc_bits.decode(rdec);
    for (auto& v : d_run) v = m_run.decode(rdec);
    for (auto& v : d_ac_cat) v = m_ac_cat.decode(rdec);
    for (auto& v : d_ac_bits) v = m_ac_bits.decode(rdec);
  }

  auto take_bits = [](const std::vector<int>& stream, std::size_t& pos, int c) {
    int bits = 0;
    for (int k = 0; k < c; ++k) bits = (bits << 1) | stream[pos++];
    return bits;
  };

  GrayImage dec;
  dec.width = img.width;
  dec.height = img.height;
  dec.samples.assign(img.pixel_count(), 0);
  std::size_t pb = 0, pr = 0, pc = 0, pab = 0;
  std::size_t bi = 0;
  prev_dc = 0;
  for (int by = 0; by < bh; ++by) {
    for (int bx = 0; bx < bw; ++bx) {
      std::array<int, 64> q{};
      int c = d_dc_cat[bi];
      q[0] = prev_dc + magnitude_value(take_bits(d_dc_bits, pb, c), c);
      prev_dc = q[0];
      int k = 1;
      while (true) {
        int run = d_run[pr++];
        if (run == kEob) break;
        k += run;
        int cc = d_ac_cat[pc++];
        q[k++] = magnitude_value(take_bits(d_ac_bits, pab, cc), cc);
      }
      double freq[B][B] = {}, out[B][B];
      for (int z = 0; z < 64; ++z) freq[zz[z] / B][zz[z] % B] = q[z] * static_cast<double>(table[zz[z]]);
      idct8(freq, out);
      for (int i = 0; i < B; ++i)
        for (int j = 0; j < B; ++j) {
          int y = by * B + i, x = bx * B + j;
          if (y < img.height && x < img.width)
            dec.at(y, x) = static_cast<std::uint8_t>(std::clamp(std::lround(out[i][j] + 128.0), 0L, 255L));
        }
      ++bi;
    }
  }
  return JpegResult{byte_size, std::move(dec)};
}

}  // namespace svrc
