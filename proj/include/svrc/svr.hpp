#pragma once

#include <array>
#include <vector>

#include "svrc/common.hpp"

namespace svrc {

using Position = std::array<double, 2>;

/// Gaussian RBF kernel exp(-|a-b|^2 / (2 sigma^2)).
double rbf_kernel(const Position& a, const Position& b, double sigma);

/// Samples for one regression problem: input positions, target values and a
/// per-sample insensitivity band.
struct TrainingSet {
  std::vector<Position> inputs;
  std::vector<double> targets;
  std::vector<double> eps;
};

struct SupportVector {
  Position input;
  double weight;  // Lagrange multiplier difference, nonzero
};

/// Bias-free sparse RBF expansion f(x) = sum_k w_k K(x_k, x).
struct SvrModel {
  double sigma = 0.0;
  std::vector<SupportVector> support;
  std::vector<double> eps_used;
};

/// Per-fit diagnostics, mainly for tests: the dual objective after each
/// sweep (nondecreasing for an exact coordinate maximizer) and the final
/// KKT violation.
struct FitReport {
  std::vector<double> objective_per_sweep;
  int sweeps = 0;
  double kkt_violation = 0.0;
};

inline constexpr double kDefaultPenalty = 1e6;
inline constexpr double kKktTolerance = 1e-4;
inline constexpr int kMaxSweeps = 2000;

/// Fits epsilon-insensitive SVR without a bias term by cyclic coordinate
/// ascent on the dual
///     max_w  -1/2 w'Kw + w't - sum_k eps_k |w_k|,   |w_k| <= C,
/// using the exact per-coordinate soft-threshold update in fixed sample
/// order. Only samples with nonzero weight are kept. Throws NoConvergence
/// if the KKT violation stays above tolerance after the sweep limit.
SvrModel fit_svr(const TrainingSet& data, double sigma, double C = kDefaultPenalty,
                 FitReport* report = nullptr);

/// Evaluates the model at each query position.
std::vector<double> predict_svr(const SvrModel& model, const std::vector<Position>& queries);

}  // namespace svrc
