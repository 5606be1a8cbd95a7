#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "svrc/common.hpp"
#include "svrc/csf.hpp"

namespace svrc {

/// Gaussian interaction matrix over the 256 coefficient frequencies.
/// Row f is proportional to exp(-|f_vec - f'_vec|^2 / (2 sigma(|f|)^2)) with
/// sigma(|f|) = c0 + c1*|f|, then normalized to sum 1.
Eigen::MatrixXd build_interaction_matrix(const ViewingGeometry& view, double c0, double c1);

/// Divisive normalization parameters. Immutable once built.
///
/// r_f = sgn(y_f) |alpha_f y_f|^gamma / (beta_f + sum_f' H(f,f') |alpha_f' y_f'|^gamma)
struct NormParams {
  Eigen::VectorXd alpha;  // 256 per-coefficient weights, > 0
  Eigen::VectorXd beta;   // 256 saturation constants, > 0
  double gamma = 2.0;
  Eigen::MatrixXd H;      // 256x256, entrywise >= 0, rows sum to 1

  // construction inputs, kept for the digest and for parameter files
  double beta_default = 0.1;
  double c0 = 0.5;
  double c1 = 0.2;
  double csf_floor = kCsfFloor;
  ViewingGeometry view;

  /// Defaults: alpha = CSF weights at each coefficient frequency,
  /// beta = 0.1 everywhere, gamma = 2, Gaussian H with c0=0.5, c1=0.2.
  static NormParams defaults(const ViewingGeometry& view = {});

  /// Parses a key=value parameter file (gamma, beta_default, c0, c1,
  /// csf_floor, samples_per_degree, plus optional 256-entry comma-separated
  /// alpha= / beta= overrides).
  static NormParams from_file(const std::string& path);

  /// FNV-1a 64-bit digest over the parameter values; stored in bitstream
  /// headers so a decoder with different parameters fails loudly.
  std::uint64_t digest() const;

  void validate() const;
};

/// Forward divisive normalization of a DCT coefficient block.
Block normalize_forward(const Block& y, const NormParams& p);

/// Analytical inverse: solves (I - D_|r| H) e = D_|r| beta for the
/// excitations e = |alpha_f y_f|^gamma, then y_f = sgn(r_f) e_f^(1/gamma)/alpha_f.
/// Throws SingularSystem when r is outside the model's range.
Block normalize_inverse(const Block& r, const NormParams& p);

/// Jacobian dr_f / dy_f' of normalize_forward at y, as a dense 256x256 matrix.
Eigen::MatrixXd normalize_jacobian(const Block& y, const NormParams& p);

/// Off-diagonal absolute mass fraction: sum_{f!=f'} |J| / sum_{f,f'} |J|.
/// 0 means perfectly diagonal. Throws ZeroMatrix on an all-zero input.
double diagonality_ratio(const Eigen::MatrixXd& J);

}  // namespace svrc
