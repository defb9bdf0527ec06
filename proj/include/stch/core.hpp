/**
 * @file core.hpp
 * @brief Domain types and scalarization functions (linear, Tchebycheff,
 *        smooth Tchebycheff) with stabilized values and gradients.
 */

#ifndef STCH_CORE_HPP
#define STCH_CORE_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>

namespace stch {

using Vector = Eigen::VectorXd;
/// Row i holds the gradient of objective i (m x n).
using Matrix = Eigen::MatrixXd;

/// Raised when a caller breaks a documented precondition.
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ContractViolation(message);
}

inline void require_same_size(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) {
    std::ostringstream os;
    os << "dimension mismatch in " << what << ": " << a << " vs " << b;
    throw ContractViolation(os.str());
  }
}

inline bool all_finite(const Vector& v) { return v.allFinite(); }

}  // namespace detail

/**
 * @brief A point in objective space. Every entry is finite.
 */
class ObjectiveVector {
 public:
  ObjectiveVector() = default;
  explicit ObjectiveVector(Vector values) : values_(std::move(values)) {
    detail::require(detail::all_finite(values_), "objective vector has non-finite entries");
  }
  ObjectiveVector(std::initializer_list<double> values)
      : ObjectiveVector(Vector::Map(values.begin(), static_cast<Eigen::Index>(values.size()))) {}

  [[nodiscard]] Eigen::Index size() const { return values_.size(); }
  [[nodiscard]] double operator[](Eigen::Index i) const { return values_[i]; }
  [[nodiscard]] const Vector& values() const { return values_; }

 private:
  Vector values_;
};

/**
 * @brief A preference vector on the probability simplex.
 */
class Preference {
 public:
  static constexpr double kSumTolerance = 1e-9;

  Preference() = default;
  explicit Preference(Vector lambda) : lambda_(std::move(lambda)) {
    detail::require(lambda_.size() >= 1, "preference must be non-empty");
    detail::require(detail::all_finite(lambda_), "preference has non-finite entries");
    detail::require((lambda_.array() >= 0.0).all(), "preference entries must be non-negative");
    detail::require(std::abs(lambda_.sum() - 1.0) <= kSumTolerance, "preference entries must sum to 1");
  }
  Preference(std::initializer_list<double> values)
      : Preference(Vector::Map(values.begin(), static_cast<Eigen::Index>(values.size()))) {}

  /// Rescales a non-negative vector onto the simplex.
  static Preference from_unnormalized(const Vector& raw) {
    detail::require((raw.array() >= 0.0).all() && raw.sum() > 0.0,
                    "cannot normalize a preference with negative entries or zero sum");
    return Preference(raw / raw.sum());
  }

  [[nodiscard]] Eigen::Index size() const { return lambda_.size(); }
  [[nodiscard]] double operator[](Eigen::Index i) const { return lambda_[i]; }
  [[nodiscard]] const Vector& values() const { return lambda_; }

 private:
  Vector lambda_;
};

/// Componentwise lower bound on achievable objective values.
struct IdealPoint {
  Vector z_star;
  /// Offset applied below observed minima when the point is derived from data.
  double epsilon = 0.1;

  /// z*_i = min_k f_i(k) - epsilon over a set of evaluated objective vectors.
  template <typename Range>
  static IdealPoint from_observed(const Range& objectives, double epsilon) {
    detail::require(epsilon > 0.0, "ideal point epsilon must be positive");
    IdealPoint ideal;
    ideal.epsilon = epsilon;
    bool first = true;
    for (const auto& f : objectives) {
      const Vector& v = [&]() -> const Vector& {
        if constexpr (std::is_same_v<std::decay_t<decltype(f)>, ObjectiveVector>) {
          return f.values();
        } else {
          return f;
        }
      }();
      if (first) {
        ideal.z_star = v;
        first = false;
      } else {
        ideal.z_star = ideal.z_star.cwiseMin(v);
      }
    }
    detail::require(!first, "cannot derive an ideal point from an empty set");
    ideal.z_star.array() -= epsilon;
    return ideal;
  }

  static IdealPoint constant(Eigen::Index m, double value) {
    return IdealPoint{Vector::Constant(m, value), 0.1};
  }
};

/// Affine objective normalization bounds (f_max > f_min componentwise).
struct Normalization {
  Vector f_min;
  Vector f_max;

  Normalization() = default;
  Normalization(Vector lo, Vector hi) : f_min(std::move(lo)), f_max(std::move(hi)) {
    detail::require_same_size(f_min.size(), f_max.size(), "normalization bounds");
    detail::require((f_max.array() > f_min.array()).all(),
                    "normalization bounds must satisfy f_max > f_min componentwise");
  }

  [[nodiscard]] Vector range() const { return f_max - f_min; }
};

enum class ScalarizationKind { LS, TCH, STCH };

inline std::string to_string(ScalarizationKind kind) {
  switch (kind) {
    case ScalarizationKind::LS:
      return "ls";
    case ScalarizationKind::TCH:
      return "tch";
    case ScalarizationKind::STCH:
      return "stch";
  }
  return "unknown";
}

inline ScalarizationKind parse_scalarization_kind(const std::string& id) {
  if (id == "ls" || id == "LS") return ScalarizationKind::LS;
  if (id == "tch" || id == "TCH") return ScalarizationKind::TCH;
  if (id == "stch" || id == "STCH") return ScalarizationKind::STCH;
  throw ContractViolation("unknown scalarization id: " + id);
}

/// Default smoothing parameter on normalized objectives.
inline constexpr double kDefaultMu = 0.1;
/// Default ideal-point offset on normalized objectives (z* = -0.1).
inline constexpr double kDefaultIdealOffset = 0.1;

/**
 * @brief Selects a scalarization and carries its parameters.
 *
 * The preference itself is passed separately to every evaluation so one
 * spec can be reused across many preferences.
 */
struct ScalarizationSpec {
  ScalarizationKind kind = ScalarizationKind::STCH;
  double mu = kDefaultMu;
  IdealPoint ideal;
  std::optional<Normalization> normalization;

  static ScalarizationSpec make(ScalarizationKind kind, Vector z_star, double mu = kDefaultMu,
                                std::optional<Normalization> normalization = std::nullopt) {
    ScalarizationSpec spec{kind, mu, IdealPoint{std::move(z_star), kDefaultIdealOffset},
                           std::move(normalization)};
    spec.validate();
    return spec;
  }

  void validate() const {
    if (kind == ScalarizationKind::STCH) {
      detail::require(mu > 0.0 && std::isfinite(mu), "STCH requires mu > 0");
    }
    if (normalization) {
      detail::require((normalization->f_max.array() > normalization->f_min.array()).all(),
                      "normalization bounds must be strictly ordered");
    }
  }
};

/// Value of a scalarization plus the coefficients that combine objective gradients.
struct ScalarizationResult {
  double value = 0.0;
  /// Gradient of the value w.r.t. x equals sum_i weights[i] * grad f_i(x).
  Vector weights;
  std::optional<Vector> gradient;
};

/// Tchebycheff value together with the objective attaining the max.
struct TchValue {
  double value = 0.0;
  Eigen::Index active_index = 0;
};

// ---------------------------------------------------------------------------
// Normalization

/**
 * Maps f_i to (f_i - f_min_i) / (f_max_i - f_min_i). Values outside the bounds
 * extrapolate linearly; no clamping.
 */
inline ObjectiveVector normalize(const ObjectiveVector& f, const Vector& f_min, const Vector& f_max) {
  detail::require_same_size(f.size(), f_min.size(), "normalize");
  detail::require_same_size(f.size(), f_max.size(), "normalize");
  detail::require((f_max.array() > f_min.array()).all(), "degenerate normalization bounds");
  return ObjectiveVector(((f.values() - f_min).array() / (f_max - f_min).array()).matrix());
}

namespace detail {

inline void check_weights(const Vector& lambda, Eigen::Index m) {
  require_same_size(lambda.size(), m, "preference");
  require(lambda.allFinite() && (lambda.array() >= 0.0).all(), "preference weights must be finite and non-negative");
}

/// Applies the spec's normalization (if any); returns the objectives and the
/// per-objective chain-rule factor 1 / (f_max - f_min).
inline std::pair<Vector, Vector> normalized_view(const ObjectiveVector& f, const ScalarizationSpec& spec) {
  if (!spec.normalization) return {f.values(), Vector::Ones(f.size())};
  const auto& nm = *spec.normalization;
  require_same_size(f.size(), nm.f_min.size(), "normalization");
  Vector range = nm.range();
  return {((f.values() - nm.f_min).array() / range.array()).matrix(), range.cwiseInverse()};
}

inline Vector ideal_or_zero(const ScalarizationSpec& spec, Eigen::Index m) {
  if (spec.ideal.z_star.size() == 0) return Vector::Zero(m);
  require_same_size(spec.ideal.z_star.size(), m, "ideal point");
  return spec.ideal.z_star;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Linear scalarization

/// sum_i lambda_i f_i
inline double eval_ls(const ObjectiveVector& f, const Vector& lambda) {
  detail::check_weights(lambda, f.size());
  double total = 0.0;
  for (Eigen::Index i = 0; i < f.size(); ++i) total += lambda[i] * f[i];
  return total;
}

inline double eval_ls(const ObjectiveVector& f, const Preference& lambda) { return eval_ls(f, lambda.values()); }

// ---------------------------------------------------------------------------
// Tchebycheff scalarization

/// Terms within this relative distance of the maximum count as tied.
inline constexpr double kTchTieTolerance = 1e-12;

/**
 * max_i lambda_i (f_i - z*_i). Ties resolve to the lowest index so the
 * subgradient choice is deterministic; terms that differ from the maximum
 * only by rounding (relative 1e-12) are ties.
 */
inline TchValue eval_tch(const ObjectiveVector& f, const Vector& lambda, const ScalarizationSpec& spec) {
  detail::check_weights(lambda, f.size());
  auto [fn, scale] = detail::normalized_view(f, spec);
  (void)scale;
  const Vector z = detail::ideal_or_zero(spec, f.size());
  const Vector y = lambda.cwiseProduct(fn - z);
  TchValue best{y.maxCoeff(), 0};
  const double tol = kTchTieTolerance * std::max(1.0, std::abs(best.value));
  while (y[best.active_index] < best.value - tol) ++best.active_index;
  return best;
}

inline TchValue eval_tch(const ObjectiveVector& f, const Preference& lambda, const ScalarizationSpec& spec) {
  return eval_tch(f, lambda.values(), spec);
}

/// lambda_k * grad f_k for the active objective k (one valid subgradient).
inline Vector tch_subgradient(const ObjectiveVector& f, const Matrix& jacobian, const Vector& lambda,
                              const ScalarizationSpec& spec) {
  detail::require_same_size(jacobian.rows(), f.size(), "jacobian rows");
  const auto active = eval_tch(f, lambda, spec).active_index;
  auto [fn, scale] = detail::normalized_view(f, spec);
  (void)fn;
  return (lambda[active] * scale[active]) * jacobian.row(active).transpose();
}

inline Vector tch_subgradient(const ObjectiveVector& f, const Matrix& jacobian, const Preference& lambda,
                              const ScalarizationSpec& spec) {
  return tch_subgradient(f, jacobian, lambda.values(), spec);
}

// ---------------------------------------------------------------------------
// Smooth Tchebycheff scalarization

/**
 * @brief mu * log sum_i exp(lambda_i (f_i - z*_i) / mu), evaluated with the
 *        max-shift so no exponent is ever positive.
 *
 * The returned weights are w_i = lambda_i * softmax_i(y / mu); they already
 * include the preference factor (and the 1/(f_max - f_min) factor when the
 * spec normalizes), so sum_i w_i grad f_i is the exact gradient.
 */
inline ScalarizationResult eval_stch(const ObjectiveVector& f, const Vector& lambda, const ScalarizationSpec& spec) {
  detail::require(spec.mu > 0.0 && std::isfinite(spec.mu), "STCH requires mu > 0");
  detail::check_weights(lambda, f.size());
  auto [fn, scale] = detail::normalized_view(f, spec);
  const Vector z = detail::ideal_or_zero(spec, f.size());
  const Eigen::Index m = f.size();

  Vector y = lambda.cwiseProduct(fn - z);
  const double y_max = y.maxCoeff();
  Vector e(m);
  double total = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    e[i] = std::exp((y[i] - y_max) / spec.mu);
    total += e[i];
  }
  ScalarizationResult result;
  result.value = y_max + spec.mu * std::log(total);
  result.weights = (lambda.array() * e.array() / total * scale.array()).matrix();
  return result;
}

inline ScalarizationResult eval_stch(const ObjectiveVector& f, const Preference& lambda,
                                     const ScalarizationSpec& spec) {
  return eval_stch(f, lambda.values(), spec);
}

/// sum_i w_i * grad f_i with w from eval_stch.
inline Vector grad_stch(const ObjectiveVector& f, const Matrix& jacobian, const Vector& lambda,
                        const ScalarizationSpec& spec) {
  detail::require_same_size(jacobian.rows(), f.size(), "jacobian rows");
  const auto r = eval_stch(f, lambda, spec);
  return jacobian.transpose() * r.weights;
}

inline Vector grad_stch(const ObjectiveVector& f, const Matrix& jacobian, const Preference& lambda,
                        const ScalarizationSpec& spec) {
  return grad_stch(f, jacobian, lambda.values(), spec);
}

// ---------------------------------------------------------------------------
// Dispatch

/**
 * Evaluates the scalarization selected by `spec.kind`. The returned weights
 * combine raw objective gradients; for TCH they select the active objective,
 * for LS they are lambda (scaled by the normalization).
 */
inline ScalarizationResult scalarize(const ObjectiveVector& f, const Vector& lambda, const ScalarizationSpec& spec) {
  switch (spec.kind) {
    case ScalarizationKind::STCH:
      return eval_stch(f, lambda, spec);
    case ScalarizationKind::TCH: {
      const auto tch = eval_tch(f, lambda, spec);
      auto [fn, scale] = detail::normalized_view(f, spec);
      (void)fn;
      ScalarizationResult r;
      r.value = tch.value;
      r.weights = Vector::Zero(f.size());
      r.weights[tch.active_index] = lambda[tch.active_index] * scale[tch.active_index];
      return r;
    }
    case ScalarizationKind::LS: {
      auto [fn, scale] = detail::normalized_view(f, spec);
      ScalarizationResult r;
      r.value = eval_ls(ObjectiveVector(fn), lambda);
      r.weights = lambda.cwiseProduct(scale);
      return r;
    }
  }
  throw ContractViolation("unknown scalarization kind");
}

/// Value plus gradient w.r.t. x through the chain rule. Rows with a zero
/// weight are skipped so an infinite partial on an ignored objective cannot
/// poison the result.
inline ScalarizationResult scalarize_with_gradient(const ObjectiveVector& f, const Matrix& jacobian,
                                                   const Vector& lambda, const ScalarizationSpec& spec) {
  detail::require_same_size(jacobian.rows(), f.size(), "jacobian rows");
  auto r = scalarize(f, lambda, spec);
  Vector g = Vector::Zero(jacobian.cols());
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    if (r.weights[i] != 0.0) g += r.weights[i] * jacobian.row(i).transpose();
  }
  r.gradient = std::move(g);
  return r;
}

// ---------------------------------------------------------------------------
// Preference sampling

/**
 * @brief Uniform sample on the simplex mixed with a floor.
 *
 * Draws i.i.d. unit exponentials and normalizes them (uniform on the
 * simplex), then maps lambda <- (1 - m * floor) * lambda + floor so every
 * entry is at least `floor`.
 */
template <typename Rng>
Preference sample_preference(Rng& rng, int m, double floor = 0.0) {
  detail::require(m >= 2, "sample_preference requires m >= 2");
  detail::require(floor >= 0.0 && floor * m < 1.0, "preference floor must satisfy 0 <= floor and floor * m < 1");
  std::exponential_distribution<double> exp1(1.0);
  Vector raw(m);
  double total = 0.0;
  for (int i = 0; i < m; ++i) {
    // exponential_distribution can return exactly zero; redraw to keep sum > 0
    do {
      raw[i] = exp1(rng);
    } while (!(raw[i] > 0.0));
    total += raw[i];
  }
  raw /= total;
  Vector lambda = (1.0 - m * floor) * raw.array() + floor;
  return Preference(std::move(lambda));
}

}  // namespace stch

#endif  // STCH_CORE_HPP
