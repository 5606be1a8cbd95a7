#include "svrc/svr.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace svrc {

double rbf_kernel(const Position& a, const Position& b, double sigma) {
  if (sigma <= 0.0) fail(ErrorCode::InvalidArgument, "rbf_kernel needs sigma > 0");
  double dx = a[0] - b[0], dy = a[1] - b[1];
  return std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
}

namespace {

// Exact maximizer of the dual restricted to coordinate k, given
// rho = t_k - f_k + K_kk w_k: soft-threshold against eps, clip at +-C.
inline double coordinate_opt(double rho, double eps, double kkk, double C) {
  double a = std::abs(rho) - eps;
  if (a <= 0.0) return 0.0;
  double w = a / kkk;
  if (rho < 0.0) w = -w;
  return std::clamp(w, -C, C);
}

double dual_objective(const Eigen::VectorXd& w, const Eigen::VectorXd& f,
                      const Eigen::VectorXd& t, const Eigen::VectorXd& eps) {
  return -0.5 * w.dot(f) + w.dot(t) - eps.dot(w.cwiseAbs());
}

// Newton finish for the slow tail of coordinate descent: on the current
// support the interior optimum satisfies K_AA w_A = t_A - sgn(w_A) eps_A.
// Solving it lands on the exact face optimum in one step. The candidate is
// rejected unless it keeps every sign, stays inside the box and does not
// lower the dual, so a wrong active set just hands control back to the
// sweeps.
bool active_set_polish(const Eigen::MatrixXd& K, const Eigen::VectorXd& t,
                       const Eigen::VectorXd& eps, double C, Eigen::VectorXd& w,
                       Eigen::VectorXd& f) {
  std::vector<Eigen::Index> act;
  for (Eigen::Index k = 0; k < w.size(); ++k)
    if (w(k) != 0.0) act.push_back(k);
  if (act.empty()) return false;

  const Eigen::Index na = static_cast<Eigen::Index>(act.size());
  Eigen::MatrixXd Kaa(na, na);
  Eigen::VectorXd rhs(na);
  for (Eigen::Index a = 0; a < na; ++a) {
    rhs(a) = t(act[a]) - (w(act[a]) > 0.0 ? eps(act[a]) : -eps(act[a]));
    for (Eigen::Index b = 0; b < na; ++b) Kaa(a, b) = K(act[a], act[b]);
  }
  Eigen::VectorXd x = Kaa.ldlt().solve(rhs);
  for (Eigen::Index a = 0; a < na; ++a) {
    if (!std::isfinite(x(a)) || std::abs(x(a)) > C) return false;
    if ((x(a) > 0.0) != (w(act[a]) > 0.0) || x(a) == 0.0) return false;
  }

  Eigen::VectorXd w_new = Eigen::VectorXd::Zero(w.size());
  for (Eigen::Index a = 0; a < na; ++a) w_new(act[a]) = x(a);
  Eigen::VectorXd f_new = K * w_new;
  if (dual_objective(w_new, f_new, t, eps) < dual_objective(w, f, t, eps)) return false;
  w = std::move(w_new);
  f = std::move(f_new);
  return true;
}

}  // namespace

SvrModel fit_svr(const TrainingSet& data, double sigma, double C, FitReport* report) {
  const std::size_t n = data.inputs.size();
  if (data.targets.size() != n || data.eps.size() != n)
    fail(ErrorCode::DimensionMismatch, "training set arrays must have equal length");
  if (sigma <= 0.0 || C <= 0.0) fail(ErrorCode::InvalidArgument, "fit_svr needs sigma > 0 and C > 0");
  for (double e : data.eps)
    if (!(e > 0.0)) fail(ErrorCode::InvalidArgument, "per-sample insensitivities must be positive");

  SvrModel model;
  model.sigma = sigma;
  model.eps_used = data.eps;
  if (report) *report = FitReport{};
  if (n == 0) return model;

  Eigen::MatrixXd K(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    K(a, a) = 1.0;
    for (std::size_t b = a + 1; b < n; ++b) {
      double v = rbf_kernel(data.inputs[a], data.inputs[b], sigma);
      K(a, b) = v;
      K(b, a) = v;
    }
  }
  Eigen::Map<const Eigen::VectorXd> t(data.targets.data(), static_cast<Eigen::Index>(n));
  Eigen::Map<const Eigen::VectorXd> eps(data.eps.data(), static_cast<Eigen::Index>(n));

  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd f = Eigen::VectorXd::Zero(n);  // f = K w, maintained incrementally

  // Stable coordinates back off exponentially; convergence is only declared
  // by a full KKT pass over all coordinates with f recomputed exactly.
  std::vector<int> skip(n, 0), period(n, 0);

  double violation = 0.0;
  int sweep = 0;
  bool converged = false;
  while (sweep < kMaxSweeps) {
    ++sweep;
    for (std::size_t k = 0; k < n; ++k) {
      if (skip[k] > 0) {
        --skip[k];
        continue;
      }
      double rho = t(k) - f(k) + K(k, k) * w(k);
      double wn = coordinate_opt(rho, eps(k), K(k, k), C);
      double delta = wn - w(k);
      if (delta != 0.0) {
        f += delta * K.col(k);
        w(k) = wn;
        period[k] = 0;
      } else {
        period[k] = std::min(2 * period[k] + 1, 15);
        skip[k] = period[k];
      }
    }
    if (report)
      report->objective_per_sweep.push_back(-0.5 * w.dot(f) + w.dot(t) - eps.dot(w.cwiseAbs()));

    violation = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      double rho = t(k) - f(k) + K(k, k) * w(k);
      double v = std::abs(coordinate_opt(rho, eps(k), K(k, k), C) - w(k));
      if (v > violation) violation = v;
    }
    if (violation >= kKktTolerance && (sweep % 25 == 0 || violation < 20.0 * kKktTolerance)) {
      if (active_set_polish(K, t, eps, C, w, f)) {
        violation = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          double rho = t(k) - f(k) + K(k, k) * w(k);
          double v = std::abs(coordinate_opt(rho, eps(k), K(k, k), C) - w(k));
          if (v > violation) violation = v;
        }
      }
    }
    if (violation < kKktTolerance) {
      f = K * w;  // drop incremental drift before trusting the verdict
      violation = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        double rho = t(k) - f(k) + K(k, k) * w(k);
        double v = std::abs(coordinate_opt(rho, eps(k), K(k, k), C) - w(k));
        if (v > violation) violation = v;
      }
      if (violation < kKktTolerance) {
        converged = true;
        break;
      }
    }
    // wake any coordinate that still violates KKT
    for (std::size_t k = 0; k < n; ++k) {
      double rho = t(k) - f(k) + K(k, k) * w(k);
      if (std::abs(coordinate_opt(rho, eps(k), K(k, k), C) - w(k)) >= kKktTolerance) {
        skip[k] = 0;
        period[k] = 0;
      }
    }
  }

  if (report) {
    report->sweeps = sweep;
    report->kkt_violation = violation;
  }
  if (!converged)
    fail(ErrorCode::NoConvergence,
         "SVR did not reach KKT tolerance after " + std::to_string(kMaxSweeps) +
             " sweeps (violation " + std::to_string(violation) + ", sigma " + std::to_string(sigma) + ")");

  for (std::size_t k = 0; k < n; ++k)
    if (w(k) != 0.0) model.support.push_back(SupportVector{data.inputs[k], w(k)});
  return model;
}

std::vector<double> predict_svr(const SvrModel& model, const std::vector<Position>& queries) {
  std::vector<double> out(queries.size(), 0.0);
  for (std::size_t q = 0; q < queries.size(); ++q) {
    double acc = 0.0;
    for (const auto& sv : model.support) acc += sv.weight * rbf_kernel(sv.input, queries[q], model.sigma);
    out[q] = acc;
  }
  return out;
}

}  // namespace svrc
