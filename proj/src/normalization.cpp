#include "svrc/normalization.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace svrc {
namespace {

// 2D frequency vector (cpd) of cell f = i*16+j.
void frequency_vectors(const ViewingGeometry& view, Eigen::MatrixX2d& fv) {
  fv.resize(kBlockCells, 2);
  for (int i = 0; i < kBlockSize; ++i)
    for (int j = 0; j < kBlockSize; ++j) {
      fv(i * kBlockSize + j, 0) = i * view.samples_per_degree / (2.0 * kBlockSize);
      fv(i * kBlockSize + j, 1) = j * view.samples_per_degree / (2.0 * kBlockSize);
    }
}

double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

void fnv_mix(std::uint64_t& h, double v) {
  std::uint64_t bits;
  static_assert(sizeof(bits) == sizeof(v));
  std::memcpy(&bits, &v, sizeof(bits));
  for (int k = 0; k < 8; ++k) {
    h ^= (bits >> (8 * k)) & 0xffu;
    h *= 0x100000001b3ull;
  }
}

}  // namespace

Eigen::MatrixXd build_interaction_matrix(const ViewingGeometry& view, double c0, double c1) {
  if (c0 <= 0.0 || c1 < 0.0) fail(ErrorCode::InvalidArgument, "interaction width needs c0 > 0, c1 >= 0");
  Eigen::MatrixX2d fv;
  frequency_vectors(view, fv);
  Eigen::MatrixXd H(kBlockCells, kBlockCells);
  for (int a = 0; a < kBlockCells; ++a) {
    double sigma = c0 + c1 * fv.row(a).norm();
    double inv2s2 = 1.0 / (2.0 * sigma * sigma);
    double sum = 0.0;
    for (int b = 0; b < kBlockCells; ++b) {
      double d2 = (fv.row(a) - fv.row(b)).squaredNorm();
      double w = std::exp(-d2 * inv2s2);
      H(a, b) = w;
      sum += w;
    }
    H.row(a) /= sum;
  }
  return H;
}

NormParams NormParams::defaults(const ViewingGeometry& view) {
  NormParams p;
  p.view = view;
  p.alpha.resize(kBlockCells);
  for (int i = 0; i < kBlockSize; ++i)
    for (int j = 0; j < kBlockSize; ++j)
      p.alpha(i * kBlockSize + j) = csf_weight(coeff_frequency(i, j, view), p.csf_floor);
  p.beta = Eigen::VectorXd::Constant(kBlockCells, p.beta_default);
  p.H = build_interaction_matrix(view, p.c0, p.c1);
  p.validate();
  return p;
}

void NormParams::validate() const {
  if (alpha.size() != kBlockCells || beta.size() != kBlockCells ||
      H.rows() != kBlockCells || H.cols() != kBlockCells)
    fail(ErrorCode::InvalidArgument, "NormParams arrays must cover all 256 coefficients");
  if (gamma <= 0.0) fail(ErrorCode::InvalidArgument, "gamma must be positive");
  if ((alpha.array() <= 0.0).any()) fail(ErrorCode::InvalidArgument, "alpha must be positive");
  if ((beta.array() <= 0.0).any()) fail(ErrorCode::InvalidArgument, "beta must be positive");
  if ((H.array() < 0.0).any()) fail(ErrorCode::InvalidArgument, "H must be nonnegative");
  for (int a = 0; a < kBlockCells; ++a)
    if (std::abs(H.row(a).sum() - 1.0) > 1e-9)
      fail(ErrorCode::InvalidArgument, "H rows must sum to 1");
}

NormParams NormParams::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open parameter file " + path);

  double gamma = 2.0, beta_default = 0.1, c0 = 0.5, c1 = 0.2, csf_floor = kCsfFloor;
  ViewingGeometry view;
  std::vector<double> alpha_override, beta_override;

  auto parse_list = [&](const std::string& value, const char* key) {
    std::vector<double> vals;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) vals.push_back(std::stod(item));
    if (vals.size() != kBlockCells)
      fail(ErrorCode::InvalidArgument,
           std::string(key) + " override needs 256 entries, got " + std::to_string(vals.size()));
    return vals;
  };

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto first = line.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrorCode::InvalidArgument, path + ":" + std::to_string(lineno) + ": expected key=value");
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r\n");
      auto e = s.find_last_not_of(" \t\r\n");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "gamma") gamma = std::stod(value);
      else if (key == "beta_default") beta_default = std::stod(value);
      else if (key == "c0") c0 = std::stod(value);
      else if (key == "c1") c1 = std::stod(value);
      else if (key == "csf_floor") csf_floor = std::stod(value);
      else if (key == "samples_per_degree") view.samples_per_degree = std::stod(value);
      else if (key == "alpha") alpha_override = parse_list(value, "alpha");
      else if (key == "beta") beta_override = parse_list(value, "beta");
      else fail(ErrorCode::InvalidArgument, path + ": unknown key '" + key + "'");
    } catch (const std::invalid_argument&) {
      fail(ErrorCode::InvalidArgument, path + ":" + std::to_string(lineno) + ": bad number");
    }
  }

  NormParams p;
  p.gamma = gamma;
  p.beta_default = beta_default;
  p.c0 = c0;
  p.c1 = c1;
  p.csf_floor = csf_floor;
  p.view = view;
  p.alpha.resize(kBlockCells);
  for (int i = 0; i < kBlockSize; ++i)
    for (int j = 0; j < kBlockSize; ++j)
      p.alpha(i * kBlockSize + j) = csf_weight(coeff_frequency(i, j, view), csf_floor);
  if (!alpha_override.empty())
    p.alpha = Eigen::Map<const Eigen::VectorXd>(alpha_override.data(), kBlockCells);
  p.beta = Eigen::VectorXd::Constant(kBlockCells, beta_default);
  if (!beta_override.empty())
    p.beta = Eigen::Map<const Eigen::VectorXd>(beta_override.data(), kBlockCells);
  p.H = build_interaction_matrix(view, c0, c1);
  p.validate();
  return p;
}

std::uint64_t NormParams::digest() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  fnv_mix(h, gamma);
  fnv_mix(h, c0);
  fnv_mix(h, c1);
  fnv_mix(h, csf_floor);
  fnv_mix(h, view.samples_per_degree);
  for (int f = 0; f < kBlockCells; ++f) fnv_mix(h, alpha(f));
  for (int f = 0; f < kBlockCells; ++f) fnv_mix(h, beta(f));
  return h;
}

Block normalize_forward(const Block& y, const NormParams& p) {
  Eigen::VectorXd e(kBlockCells);
  for (int f = 0; f < kBlockCells; ++f)
    e(f) = std::pow(std::abs(p.alpha(f) * y[f]), p.gamma);
  Eigen::VectorXd den = p.beta + p.H * e;
  Block r;
  for (int f = 0; f < kBlockCells; ++f) r[f] = sgn(y[f]) * e(f) / den(f);
  return r;
}

Block normalize_inverse(const Block& r, const NormParams& p) {
  Eigen::VectorXd rabs(kBlockCells);
  for (int f = 0; f < kBlockCells; ++f) rabs(f) = std::abs(r[f]);

  // (I - D_|r| H) e = D_|r| beta
  Eigen::MatrixXd M = rabs.asDiagonal() * p.H;
  M = Eigen::MatrixXd::Identity(kBlockCells, kBlockCells) - M;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
  // Partial-pivot LU has no rank query; a vanishing diagonal pivot marks
  // singularity within roundoff.
  double umax = lu.matrixLU().diagonal().cwiseAbs().maxCoeff();
  double umin = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (umax == 0.0 || umin < 1e-13 * umax)
    fail(ErrorCode::SingularSystem, "response outside the normalization model's range");
  Eigen::VectorXd e = lu.solve(rabs.cwiseProduct(p.beta));

  Block y;
  for (int f = 0; f < kBlockCells; ++f) {
    double ef = e(f) < 0.0 ? 0.0 : e(f);  // roundoff guard; true excitations are >= 0
    y[f] = sgn(r[f]) * std::pow(ef, 1.0 / p.gamma) / p.alpha(f);
  }
  return y;
}

Eigen::MatrixXd normalize_jacobian(const Block& y, const NormParams& p) {
  Eigen::VectorXd e(kBlockCells), u(kBlockCells), s(kBlockCells);
  for (int f = 0; f < kBlockCells; ++f) {
    double ay = std::abs(p.alpha(f) * y[f]);
    s(f) = sgn(y[f]);
    e(f) = std::pow(ay, p.gamma);
    // d e_f / d y_f; the sign factor comes from d|y|/dy
    u(f) = p.gamma * p.alpha(f) * std::pow(ay, p.gamma - 1.0) * s(f);
  }
  Eigen::VectorXd den = p.beta + p.H * e;

  Eigen::MatrixXd J(kBlockCells, kBlockCells);
  for (int f = 0; f < kBlockCells; ++f) {
    double scale = s(f) * e(f) / (den(f) * den(f));
    for (int g = 0; g < kBlockCells; ++g) J(f, g) = -scale * p.H(f, g) * u(g);
    J(f, f) += s(f) * u(f) / den(f);
  }
  return J;
}

double diagonality_ratio(const Eigen::MatrixXd& J) {
  if (J.rows() != J.cols()) fail(ErrorCode::DimensionMismatch, "diagonality_ratio needs a square matrix");
  double off = 0.0, diag = 0.0;
  for (Eigen::Index a = 0; a < J.rows(); ++a)
    for (Eigen::Index b = 0; b < J.cols(); ++b)
      (a == b ? diag : off) += std::abs(J(a, b));
  if (off + diag == 0.0) fail(ErrorCode::ZeroMatrix, "all-zero matrix has no diagonality ratio");
  return off / (off + diag);
}

}  // namespace svrc
