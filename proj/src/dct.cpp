#include "svrc/dct.hpp"

#include <cmath>

namespace svrc {
namespace {

constexpr int N = kBlockSize;

struct Basis {
  double c[N][N];  // c[k][x] = s_k cos(pi (2x+1) k / 2N)
  Basis() {
    const double pi = std::acos(-1.0);
    for (int k = 0; k < N; ++k) {
      double s = std::sqrt((k == 0 ? 1.0 : 2.0) / N);
      for (int x = 0; x < N; ++x) c[k][x] = s * std::cos(pi * (2 * x + 1) * k / (2.0 * N));
    }
  }
};

const Basis& basis() {
  static const Basis b;
  return b;
}

}  // namespace

Block dct2_forward(const Block& block) {
  const auto& C = basis().c;
  double tmp[N][N];  // rows transformed: tmp = X * C^T
  for (int i = 0; i < N; ++i) {
    for (int k = 0; k < N; ++k) {
      double acc = 0.0;
      for (int x = 0; x < N; ++x) acc += block[i * N + x] * C[k][x];
      tmp[i][k] = acc;
    }
  }
  Block out;
  for (int k = 0; k < N; ++k) {
    for (int j = 0; j < N; ++j) {
      double acc = 0.0;
      for (int y = 0; y < N; ++y) acc += C[k][y] * tmp[y][j];
      out[k * N + j] = acc;
    }
  }
  return out;
}

Block dct2_inverse(const Block& coeffs) {
  const auto& C = basis().c;
  double tmp[N][N];  // tmp = C^T * Y
  for (int x = 0; x < N; ++x) {
    for (int j = 0; j < N; ++j) {
      double acc = 0.0;
      for (int k = 0; k < N; ++k) acc += C[k][x] * coeffs[k * N + j];
      tmp[x][j] = acc;
    }
  }
  Block out;
  for (int x = 0; x < N; ++x) {
    for (int y = 0; y < N; ++y) {
      double acc = 0.0;
      for (int k = 0; k < N; ++k) acc += tmp[x][k] * C[k][y];
      out[x * N + y] = acc;
    }
  }
  return out;
}

}  // namespace svrc
