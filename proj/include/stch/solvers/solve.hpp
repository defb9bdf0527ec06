/**
 * @file solve.hpp
 * @brief Single-preference solvers: projected (sub)gradient descent on a
 *        scalarization and the MGDA baseline.
 */

#ifndef STCH_SOLVERS_SOLVE_HPP
#define STCH_SOLVERS_SOLVE_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stch/core.hpp"
#include "stch/io.hpp"
#include "stch/problems/problem.hpp"
#include "stch/solvers/min_norm.hpp"

namespace stch {

enum class StepSchedule { Constant, InvSqrtT };

inline std::string to_string(StepSchedule s) { return s == StepSchedule::Constant ? "constant" : "inv_sqrt_t"; }

inline StepSchedule parse_step_schedule(const std::string& id) {
  if (id == "constant") return StepSchedule::Constant;
  if (id == "inv_sqrt_t") return StepSchedule::InvSqrtT;
  throw ContractViolation("unknown step schedule: " + id);
}

struct SolveConfig {
  int max_iters = 200;
  double step_size = 0.25;
  StepSchedule schedule = StepSchedule::Constant;
  std::uint64_t seed = 0;
  /// Keep every k-th iterate (the first and last are always kept).
  int record_every = 1;
  /// Gradient-norm stop; ignored for TCH, which always runs max_iters.
  double tolerance = 0.0;
  /// Starting point; drawn uniformly in the box from `seed` when absent.
  std::optional<Vector> x0;

  void validate() const {
    detail::require(max_iters >= 1, "max_iters must be >= 1");
    detail::require(step_size > 0.0 && std::isfinite(step_size), "step_size must be > 0");
    detail::require(record_every >= 1, "record_every must be >= 1");
    detail::require(tolerance >= 0.0, "tolerance must be >= 0");
  }

  /// Step used to produce iterate t (t >= 1).
  [[nodiscard]] double step(int t) const {
    return schedule == StepSchedule::Constant ? step_size : step_size / std::sqrt(static_cast<double>(t));
  }
};

struct TrajectoryPoint {
  int iter = 0;
  std::int64_t evaluations = 0;
  Vector x;
  Vector f;
  double value = 0.0;
  double grad_norm = 0.0;
};

enum class StopReason { MaxIters, Tolerance };

struct Trajectory {
  std::vector<TrajectoryPoint> iterates;
  /// Objective-vector evaluations, including the starting point.
  std::int64_t evaluations = 0;
  /// Objective-gradient evaluations: one combined gradient per step for a
  /// scalarization, m per step for MGDA.
  std::int64_t gradient_evaluations = 0;
  StopReason stop = StopReason::MaxIters;

  [[nodiscard]] const TrajectoryPoint& last() const { return iterates.back(); }
  [[nodiscard]] bool converged() const { return stop == StopReason::Tolerance; }
};

/// Thrown when an iterate produces a non-finite value; carries the run up to the last finite iterate.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, Trajectory partial)
      : std::runtime_error(what), trajectory_(std::move(partial)) {}
  [[nodiscard]] const Trajectory& trajectory() const { return trajectory_; }

 private:
  Trajectory trajectory_;
};

inline Vector project_box(const Vector& x, const Vector& lower, const Vector& upper) {
  detail::require_same_size(x.size(), lower.size(), "project_box");
  detail::require_same_size(x.size(), upper.size(), "project_box");
  return x.cwiseMax(lower).cwiseMin(upper);
}

inline Vector sample_in_box(std::uint64_t seed, const Vector& lower, const Vector& upper) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector x(lower.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = lower[i] + (upper[i] - lower[i]) * unit(rng);
  return x;
}

/// Spread of the weighted gaps max_i y_i - min_i y_i with y_i = lambda_i (f_i - z*_i) on the spec's scale.
inline double balance_residual(const ObjectiveVector& f, const Vector& lambda, const ScalarizationSpec& spec) {
  auto [fn, scale] = detail::normalized_view(f, spec);
  (void)scale;
  const Vector y = lambda.cwiseProduct(fn - detail::ideal_or_zero(spec, f.size()));
  return y.maxCoeff() - y.minCoeff();
}

/// Jacobian rows rescaled to the spec's normalized objectives.
inline Matrix normalized_jacobian(const Matrix& jacobian, const ScalarizationSpec& spec) {
  if (!spec.normalization) return jacobian;
  return spec.normalization->range().cwiseInverse().asDiagonal() * jacobian;
}

namespace detail {

inline Vector starting_point(const Problem& problem, const SolveConfig& config) {
  if (config.x0) {
    require_same_size(config.x0->size(), problem.n(), "x0");
    return project_box(*config.x0, problem.lower(), problem.upper());
  }
  return sample_in_box(config.seed, problem.lower(), problem.upper());
}

inline bool should_record(int t, const SolveConfig& config) { return t % config.record_every == 0; }

/// Shared projected-descent loop. `direction(x, f, J, value&)` returns d_t and sets the value.
template <typename DirectionFn>
Trajectory descend(const Problem& problem, const SolveConfig& config, bool use_tolerance, int gradients_per_step,
                   DirectionFn&& direction) {
  config.validate();
  Trajectory traj;
  Vector x = starting_point(problem, config);

  for (int t = 0;; ++t) {
    const Vector f = problem.evaluate_unchecked(x);
    traj.evaluations += 1;
    double value = 0.0;
    Vector d;
    if (f.allFinite()) {
      const Matrix jac = problem.jacobian_unchecked(x);
      traj.gradient_evaluations += gradients_per_step;
      d = direction(x, f, jac, value);
    }
    if (!f.allFinite() || !std::isfinite(value) || !d.allFinite()) {
      std::ostringstream msg;
      msg << "non-finite value at iteration " << t;
      if (!traj.iterates.empty()) msg << " (last finite iterate: " << traj.iterates.back().iter << ")";
      throw DivergenceError(msg.str(), std::move(traj));
    }

    const double gnorm = d.norm();
    const bool stop_tol = use_tolerance && gnorm < config.tolerance;
    const bool stop_max = t >= config.max_iters;
    const bool record = should_record(t, config) || stop_tol || stop_max;
    if (record) traj.iterates.push_back({t, traj.evaluations, x, f, value, gnorm});
    if (stop_tol) {
      traj.stop = StopReason::Tolerance;
      break;
    }
    if (stop_max) break;
    x = project_box(x - config.step(t + 1) * d, problem.lower(), problem.upper());
  }
  return traj;
}

}  // namespace detail

/**
 * @brief Projected gradient descent on a scalarization of the problem.
 *
 * x_t = clamp(x_{t-1} - eta_t d_{t-1}) with d the STCH or LS gradient or the
 * TCH subgradient. Iterate t has consumed t + 1 evaluations. STCH and LS
 * stop early once |d| < tolerance.
 */
inline Trajectory solve_scalarized(const Problem& problem, const ScalarizationSpec& spec, const Vector& lambda,
                                   const SolveConfig& config) {
  spec.validate();
  detail::require_same_size(lambda.size(), problem.m(), "preference");
  const bool smooth = spec.kind != ScalarizationKind::TCH;
  return detail::descend(problem, config, smooth, 1,
                         [&](const Vector&, const Vector& f, const Matrix& jac, double& value) -> Vector {
                           const ObjectiveVector fv(f);
                           if (spec.kind == ScalarizationKind::TCH) {
                             value = eval_tch(fv, lambda, spec).value;
                             return tch_subgradient(fv, jac, lambda, spec);
                           }
                           auto r = scalarize_with_gradient(fv, jac, lambda, spec);
                           value = r.value;
                           return *r.gradient;
                         });
}

inline Trajectory solve_scalarized(const Problem& problem, const ScalarizationSpec& spec, const Preference& lambda,
                                   const SolveConfig& config) {
  return solve_scalarized(problem, spec, lambda.values(), config);
}

/**
 * @brief MGDA: steps along the min-norm convex combination of the objective
 *        gradients, stopping when its norm drops below the tolerance.
 *
 * `normalization` rescales the objectives first, matching the scalarized
 * solvers. The recorded value is the norm of the common direction.
 */
inline Trajectory solve_mgda(const Problem& problem, const SolveConfig& config,
                             const std::optional<Normalization>& normalization = std::nullopt) {
  Vector inv_range = Vector::Ones(problem.m());
  if (normalization) inv_range = normalization->range().cwiseInverse();
  return detail::descend(problem, config, true, problem.m(),
                         [&](const Vector&, const Vector&, const Matrix& jac, double& value) -> Vector {
                           const Matrix g = inv_range.asDiagonal() * jac;
                           const Vector d = g.transpose() * min_norm_weights(g);
                           value = d.norm();
                           return d;
                         });
}

/// CSV with columns iter, evals, x1..xn, f1..fm, value, grad_norm.
inline std::string trajectory_to_csv(const Trajectory& traj, const HeaderBlock& header = {}) {
  std::ostringstream os;
  write_header(os, header);
  if (traj.iterates.empty()) return os.str();
  const auto n = traj.iterates.front().x.size();
  const auto m = traj.iterates.front().f.size();
  os << "iter,evals";
  for (Eigen::Index i = 0; i < n; ++i) os << ",x" << (i + 1);
  for (Eigen::Index i = 0; i < m; ++i) os << ",f" << (i + 1);
  os << ",value,grad_norm\n";
  for (const auto& p : traj.iterates) {
    os << p.iter << ',' << p.evaluations << ',' << join(p.x) << ',' << join(p.f) << ',' << format_double(p.value)
       << ',' << format_double(p.grad_norm) << '\n';
  }
  return os.str();
}

}  // namespace stch

#endif  // STCH_SOLVERS_SOLVE_HPP
