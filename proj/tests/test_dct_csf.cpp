#include <doctest.h>

#include <cmath>

#include "support/synthetic.hpp"
#include "svrc/csf.hpp"
#include "svrc/dct.hpp"

using namespace svrc;
using testsupport::Rng;

namespace {

// O(N^4) reference transform, written directly from the cosine sum.
Block slow_dct2(const Block& in) {
  const double pi = std::acos(-1.0);
  Block out{};
  for (int u = 0; u < 16; ++u)
    for (int v = 0; v < 16; ++v) {
      double su = std::sqrt((u == 0 ? 1.0 : 2.0) / 16.0);
      double sv = std::sqrt((v == 0 ? 1.0 : 2.0) / 16.0);
      double acc = 0.0;
      for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 16; ++x)
          acc += in[y * 16 + x] * std::cos(pi * (2 * y + 1) * u / 32.0) *
                 std::cos(pi * (2 * x + 1) * v / 32.0);
      out[u * 16 + v] = su * sv * acc;
    }
  return out;
}

double norm2(const Block& b) {
  double acc = 0.0;
  for (double v : b) acc += v * v;
  return std::sqrt(acc);
}

}  // namespace

TEST_CASE("dct: constant block concentrates in DC") {
  Block b;
  b.fill(0.3);
  Block c = dct2_forward(b);
  CHECK(c[0] == doctest::Approx(16.0 * 0.3).epsilon(1e-12));
  for (int k = 1; k < 256; ++k) CHECK(std::abs(c[k]) < 1e-12);
}

TEST_CASE("dct: matches the direct cosine-sum reference") {
  Rng rng(7);
  for (int t = 0; t < 10; ++t) {
    Block b = testsupport::random_block(rng, -1.0, 1.0);
    Block fast = dct2_forward(b);
    Block slow = slow_dct2(b);
    for (int k = 0; k < 256; ++k) CHECK(fast[k] == doctest::Approx(slow[k]).epsilon(1e-10));
  }
}

TEST_CASE("dct: unitarity and round trip") {
  Rng rng(8);
  for (int t = 0; t < 200; ++t) {
    Block b = testsupport::random_block(rng, -1.0, 1.0);
    Block c = dct2_forward(b);
    CHECK(std::abs(norm2(c) - norm2(b)) < 1e-12);
    Block back = dct2_inverse(c);
    for (int k = 0; k < 256; ++k) CHECK(std::abs(back[k] - b[k]) < 1e-9);
  }
}

TEST_CASE("dct: zero maps to zero, unit DC to a 1/16 constant") {
  Block z{};
  Block back = dct2_inverse(z);
  for (double v : back) CHECK(v == 0.0);

  Block dc{};
  dc[0] = 1.0;
  Block flat = dct2_inverse(dc);
  for (double v : flat) CHECK(v == doctest::Approx(1.0 / 16.0).epsilon(1e-12));
}

TEST_CASE("dct: each basis function round-trips to a unit coefficient") {
  for (int cell : {0, 1, 17, 35, 255, 16 * 7 + 3}) {
    Block c{};
    c[cell] = 1.0;
    Block basis = dct2_inverse(c);
    Block fwd = dct2_forward(basis);
    for (int k = 0; k < 256; ++k)
      CHECK(std::abs(fwd[k] - (k == cell ? 1.0 : 0.0)) < 1e-12);
  }
}

TEST_CASE("frequency map at the default viewing geometry") {
  CHECK(coeff_frequency(0, 0) == 0.0);
  CHECK(coeff_frequency(1, 0) == doctest::Approx(8.0 / 3.0).epsilon(1e-12));
  CHECK(coeff_frequency(15, 15) == doctest::Approx(std::sqrt(2.0) * 40.0).epsilon(1e-12));
  // monotone in each index
  for (int i = 0; i < 15; ++i)
    for (int j = 0; j < 16; ++j) {
      CHECK(coeff_frequency(i + 1, j) >= coeff_frequency(i, j));
      CHECK(coeff_frequency(j, i + 1) >= coeff_frequency(j, i));
    }
}

TEST_CASE("csf: normalized peak near 8 cpd, monotone tail, clamped floor") {
  double best_f = 0.0, best = 0.0;
  for (double f = 0.0; f <= 60.0; f += 0.001) {
    double w = csf_weight(f);
    CHECK(w >= 0.01);
    CHECK(w <= 1.0);
    if (w > best) {
      best = w;
      best_f = f;
    }
  }
  CHECK(best == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(best_f - 8.0) < 0.15);
  CHECK(csf_weight(30.0) < csf_weight(10.0));
  CHECK(csf_weight(58.0) == 0.01);
}
