#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "support/synthetic.hpp"
#include "svrc/blocks.hpp"
#include "svrc/dct.hpp"
#include "svrc/normalization.hpp"

using namespace svrc;
using testsupport::Rng;

namespace {

// Scalar instance of the model: alpha=beta=1, H=I, so each cell is the
// textbook sigmoid r = sgn(y)|y|^g / (1 + |y|^g).
NormParams scalar_params() {
  NormParams p = NormParams::defaults();
  p.alpha.setOnes();
  p.beta.setOnes();
  p.gamma = 2.0;
  p.H = Eigen::MatrixXd::Identity(kBlockCells, kBlockCells);
  return p;
}

double rel_err(const Block& a, const Block& b) {
  double num = 0.0, den = 0.0;
  for (int k = 0; k < kBlockCells; ++k) {
    num += (a[k] - b[k]) * (a[k] - b[k]);
    den += b[k] * b[k];
  }
  return std::sqrt(num) / std::sqrt(den);
}

}  // namespace

TEST_CASE("interaction matrix: rows sum to 1 and peak on the diagonal") {
  Eigen::MatrixXd H = build_interaction_matrix({}, 0.5, 0.2);
  for (int a = 0; a < kBlockCells; ++a) {
    CHECK(std::abs(H.row(a).sum() - 1.0) < 1e-12);
    int argmax = 0;
    H.row(a).maxCoeff(&argmax);
    CHECK(argmax == a);
    CHECK((H.row(a).array() >= 0.0).all());
  }
}

TEST_CASE("interaction matrix: c1 = 0 gives one width everywhere") {
  Eigen::MatrixXd H = build_interaction_matrix({}, 1.5, 0.0);
  // unnormalized profile exp(-d^2 / (2 c0^2)): the ratio to the diagonal
  // entry depends only on distance, for every row
  double f_unit = (256.0 / 3.0) / 32.0;  // one index step in cpd
  double expect = std::exp(-f_unit * f_unit / (2.0 * 1.5 * 1.5));
  for (int a : {0, 5, 100, 254}) {
    int right = a + 1;
    if (a % kBlockSize == kBlockSize - 1) continue;
    CHECK(H(a, right) / H(a, a) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("forward: zero input, sign symmetry, scalar case") {
  NormParams p = NormParams::defaults();
  Block zero{};
  Block r = normalize_forward(zero, p);
  for (double v : r) CHECK(v == 0.0);

  NormParams sp = scalar_params();
  Block y{};
  y[0] = 1.0;
  CHECK(normalize_forward(y, sp)[0] == doctest::Approx(0.5).epsilon(1e-15));

  Rng rng(11);
  Block a = testsupport::random_block(rng, -1.0, 1.0);
  Block neg;
  for (int k = 0; k < 256; ++k) neg[k] = -a[k];
  Block ra = normalize_forward(a, p);
  Block rneg = normalize_forward(neg, p);
  for (int k = 0; k < 256; ++k) {
    CHECK(rneg[k] == doctest::Approx(-ra[k]).epsilon(1e-15));
    // sign preservation
    if (a[k] > 0) CHECK(ra[k] > 0);
    if (a[k] < 0) CHECK(ra[k] < 0);
  }
}

TEST_CASE("forward: own-coefficient monotonicity") {
  NormParams p = NormParams::defaults();
  Rng rng(12);
  Block y = testsupport::random_block(rng, -1.0, 1.0);
  for (int cell : {1, 40, 200}) {
    double prev = -1.0;
    for (double v = 0.0; v <= 2.0; v += 0.05) {
      y[cell] = v;
      double r = normalize_forward(y, p)[cell];
      CHECK(r >= prev - 1e-15);
      prev = r;
    }
  }
}

TEST_CASE("forward: responses stay below 1 when excitations stay below beta") {
  NormParams p = NormParams::defaults();
  double bound = std::sqrt(p.beta.minCoeff());  // |alpha y| <= |y| <= sqrt(beta)
  Rng rng(13);
  for (int t = 0; t < 50; ++t) {
    Block y = testsupport::random_block(rng, -bound, bound);
    Block r = normalize_forward(y, p);
    for (double v : r) CHECK(std::abs(v) < 1.0);
  }
}

TEST_CASE("inverse: zero, scalar case, and round trip at 1e-8") {
  NormParams p = NormParams::defaults();
  Block zero{};
  Block y0 = normalize_inverse(zero, p);
  for (double v : y0) CHECK(v == 0.0);

  NormParams sp = scalar_params();
  Block r{};
  r[0] = 0.5;
  CHECK(normalize_inverse(r, sp)[0] == doctest::Approx(1.0).epsilon(1e-12));

  Rng rng(14);
  for (int t = 0; t < 100; ++t) {
    Block y = testsupport::random_block(rng, -1.0, 1.0);
    Block back = normalize_inverse(normalize_forward(y, p), p);
    CHECK(rel_err(back, y) < 1e-8);
  }
}

TEST_CASE("inverse: singular system is reported") {
  NormParams sp = scalar_params();
  Block r;
  r.fill(1.0);  // (I - D_|r| H) = 0 for H = I
  try {
    normalize_inverse(r, sp);
    FAIL("expected SingularSystem");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularSystem);
  }
}

TEST_CASE("jacobian: scalar derivative and diagonal structure under identity H") {
  NormParams sp = scalar_params();
  Block y{};
  y[0] = 1.0;
  Eigen::MatrixXd J = normalize_jacobian(y, sp);
  CHECK(J(0, 0) == doctest::Approx(0.5).epsilon(1e-12));  // d/dy y^2/(1+y^2) at 1

  Rng rng(15);
  Block yr = testsupport::random_block(rng, -1.0, 1.0);
  Eigen::MatrixXd Jr = normalize_jacobian(yr, sp);
  for (int a = 0; a < kBlockCells; ++a)
    for (int b = 0; b < kBlockCells; ++b)
      if (a != b) CHECK(Jr(a, b) == 0.0);
}

TEST_CASE("jacobian: agrees with central finite differences") {
  NormParams p = NormParams::defaults();
  Rng rng(16);
  const double step = 1e-5;
  for (int t = 0; t < 3; ++t) {
    Block y;
    for (auto& v : y) {
      double mag = 0.01 + 0.99 * rng.uniform();
      v = rng.uniform() < 0.5 ? -mag : mag;
    }
    Eigen::MatrixXd J = normalize_jacobian(y, p);
    Eigen::MatrixXd FD(kBlockCells, kBlockCells);
    for (int c = 0; c < kBlockCells; ++c) {
      Block hi = y, lo = y;
      hi[c] += step;
      lo[c] -= step;
      Block rhi = normalize_forward(hi, p), rlo = normalize_forward(lo, p);
      for (int f = 0; f < kBlockCells; ++f) FD(f, c) = (rhi[f] - rlo[f]) / (2.0 * step);
    }
    double worst = 0.0;
    for (int f = 0; f < kBlockCells; ++f)
      for (int c = 0; c < kBlockCells; ++c) {
        double denom = std::max(std::abs(FD(f, c)), 1e-6);
        worst = std::max(worst, std::abs(J(f, c) - FD(f, c)) / denom);
      }
    CHECK(worst < 1e-4);
  }
}

TEST_CASE("diagonality ratio: identity, all-ones, zero") {
  CHECK(diagonality_ratio(Eigen::MatrixXd::Identity(5, 5)) == 0.0);
  CHECK(diagonality_ratio(Eigen::MatrixXd::Ones(2, 2)) == doctest::Approx(0.5).epsilon(1e-15));
  try {
    diagonality_ratio(Eigen::MatrixXd::Zero(3, 3));
    FAIL("expected ZeroMatrix");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroMatrix);
  }
}

TEST_CASE("diagonality ratio: positive on a textured natural block") {
  NormParams p = NormParams::defaults();
  GrayImage img = testsupport::synth_texture();
  BlockGrid grid = tile_blocks(img);
  Block y = dct2_forward(grid.blocks[4 * grid.cols + 4]);
  CHECK(diagonality_ratio(normalize_jacobian(y, p)) > 0.01);
}

TEST_CASE("parameter files: overrides, digest, rejects") {
  std::string path = "norm_params_test.txt";
  {
    std::ofstream out(path);
    out << "# comment line\n";
    out << "gamma = 2\n";
    out << "beta_default = 0.25\n";
    out << "c0 = 0.7\n";
    out << "c1 = 0.1\n";
  }
  NormParams p = NormParams::from_file(path);
  CHECK(p.beta(0) == 0.25);
  CHECK(p.c0 == 0.7);
  CHECK(p.digest() != NormParams::defaults().digest());
  std::remove(path.c_str());

  {
    std::ofstream out(path);
    out << "nonsense = 1\n";
  }
  CHECK_THROWS_AS(NormParams::from_file(path), Error);
  std::remove(path.c_str());
}
