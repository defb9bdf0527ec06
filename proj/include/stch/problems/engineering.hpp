/**
 * @file engineering.hpp
 * @brief Real-world engineering design benchmarks: four-bar truss (RE21),
 *        hatch cover (RE24), disk brake (RE33), gear train (RE36) and rocket
 *        injector (RE37).
 *
 * Constraint-violation objectives are sums of hinges max{-g_i, 0}; a hinge
 * contributes -grad g_i while violated and zero otherwise (also at the kink).
 */

#ifndef STCH_PROBLEMS_ENGINEERING_HPP
#define STCH_PROBLEMS_ENGINEERING_HPP

#include <array>
#include <cmath>
#include <initializer_list>
#include <numbers>
#include <vector>

#include "stch/problems/problem.hpp"

namespace stch {

namespace detail {

inline Vector make_vector(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

/// Adds the subgradient of the hinge max{-g, 0} to `grad`.
template <typename GradG, typename Grad>
void accumulate_violation(double g, const GradG& grad_g, Grad&& grad) {
  if (-g > 0.0) grad -= grad_g;
}

}  // namespace detail

/// Four-bar truss: structural volume vs joint displacement.
class BarTrussProblem final : public Problem {
 public:
  static constexpr double kForce = 10.0;
  static constexpr double kElasticity = 2e5;
  static constexpr double kLength = 200.0;
  static constexpr double kStress = 10.0;
  static constexpr double kA = kForce / kStress;

  BarTrussProblem()
      : Problem("RE21", "BarTruss",
                detail::make_vector({kA, std::numbers::sqrt2 * kA, std::numbers::sqrt2 * kA, kA}),
                Vector::Constant(4, 3.0 * kA), 2) {}

  [[nodiscard]] Vector evaluate_unchecked(const Vector& x) const override {
    constexpr double r2 = std::numbers::sqrt2;
    Vector f(2);
    f[0] = kLength * (2.0 * x[0] + r2 * x[1] + std::sqrt(x[2]) + x[3]);
    f[1] = (kForce * kLength / kElasticity) * (2.0 / x[0] + 2.0 * r2 / x[1] - 2.0 * r2 / x[2] + 2.0 / x[3]);
    return f;
  }

  [[nodiscard]] Matrix jacobian_unchecked(const Vector& x) const override {
    constexpr double r2 = std::numbers::sqrt2;
    constexpr double k = kForce * kLength / kElasticity;
    Matrix j(2, 4);
    j.row(0) << 2.0 * kLength, r2 * kLength, 0.5 * kLength / std::sqrt(x[2]), kLength;
    j.row(1) << -2.0 * k / (x[0] * x[0]), -2.0 * r2 * k / (x[1] * x[1]), 2.0 * r2 * k / (x[2] * x[2]),
        -2.0 * k / (x[3] * x[3]);
    return j;
  }
};

/// Hatch cover: weight vs summed violation of four stress/deflection constraints.
class HatchCoverProblem final : public Problem {
 public:
  static constexpr double kE = 700000.0;
  static constexpr double kSigmaBMax = 700.0;
  static constexpr double kTauMax = 450.0;
  static constexpr double kDeltaMax = 1.5;

  HatchCoverProblem() : Problem("RE24", "HatchCover", detail::make_vector({0.5, 0.5}), detail::make_vector({4.0, 50.0}), 2) {}

  /// Constraint values g_1..g_4 (feasible when all >= 0).
  [[nodiscard]] std::array<double, 4> constraints(const Vector& x) const {
    const auto c = compute(x);
    return {c.g[0], c.g[1], c.g[2], c.g[3]};
  }

  [[nodiscard]] Vector evaluate_unchecked(const Vector& x) const override {
    const auto c = compute(x);
    Vector f(2);
    f[0] = x[0] + 120.0 * x[1];
    f[1] = 0.0;
    for (double g : c.g) f[1] += std::max(-g, 0.0);
    return f;
  }

  [[nodiscard]] Matrix jacobian_unchecked(const Vector& x) const override {
    const auto c = compute(x);
    Matrix j = Matrix::Zero(2, 2);
    j(0, 0) = 1.0;
    j(0, 1) = 120.0;
    for (int i = 0; i < 4; ++i) detail::accumulate_violation(c.g[i], c.dg.row(i), j.row(1));
    return j;
  }

 private:
  struct Parts {
    std::array<double, 4> g;
    Eigen::Matrix<double, 4, 2> dg;
  };

  static Parts compute(const Vector& x) {
    const double x1 = x[0];
    const double x2 = x[1];
    const double sigma_b = 4500.0 / (x1 * x2);
    const double tau = 1800.0 / x2;
    const double delta = 56.2e4 / (kE * x1 * x2 * x2);
    const double sigma_k = kE * x1 * x1 / 100.0;

    const Eigen::RowVector2d d_sigma_b(-sigma_b / x1, -sigma_b / x2);
    const Eigen::RowVector2d d_tau(0.0, -tau / x2);
    const Eigen::RowVector2d d_delta(-delta / x1, -2.0 * delta / x2);
    const Eigen::RowVector2d d_sigma_k(2.0 * sigma_k / x1, 0.0);

    Parts p;
    p.g = {1.0 - sigma_b / kSigmaBMax, 1.0 - tau / kTauMax, 1.0 - delta / kDeltaMax, 1.0 - sigma_b / sigma_k};
    p.dg.row(0) = -d_sigma_b / kSigmaBMax;
    p.dg.row(1) = -d_tau / kTauMax;
    p.dg.row(2) = -d_delta / kDeltaMax;
    p.dg.row(3) = -(d_sigma_b * sigma_k - sigma_b * d_sigma_k) / (sigma_k * sigma_k);
    return p;
  }
};

/**
 * Disk brake: mass, stopping time and summed constraint violation.
 *
 * The ratios (x2^2 - x1^2)/(x2^3 - x1^3) and its inverse are evaluated in the
 * cancelled forms (x1 + x2)/(x1^2 + x1 x2 + x2^2) and reciprocal, which are
 * identical wherever the originals are defined and avoid 0/0 at x1 = x2.
 */
class DiskBrakeProblem final : public Problem {
 public:
  DiskBrakeProblem()
      : Problem("RE33", "DiskBrake", detail::make_vector({55.0, 75.0, 1000.0, 11.0}),
                detail::make_vector({80.0, 110.0, 3000.0, 20.0}), 3) {}

  [[nodiscard]] std::array<double, 4> constraints(const Vector& x) const {
    const auto c = compute(x);
    return {c.g[0], c.g[1], c.g[2], c.g[3]};
  }

  [[nodiscard]] Vector evaluate_unchecked(const Vector& x) const override {
    const auto c = compute(x);
    Vector f(3);
    f[0] = c.f1;
    f[1] = c.f2;
    f[2] = 0.0;
    for (double g : c.g) f[2] += std::max(-g, 0.0);
    return f;
  }

  [[nodiscard]] Matrix jacobian_unchecked(const Vector& x) const override {
    const auto c = compute(x);
    Matrix j = Matrix::Zero(3, 4);
    j.row(0) = c.df1;
    j.row(1) = c.df2;
    for (int i = 0; i < 4; ++i) detail::accumulate_violation(c.g[i], c.dg.row(i), j.row(2));
    return j;
  }

 private:
  struct Parts {
    double f1;
    double f2;
    Eigen::RowVector4d df1;
    Eigen::RowVector4d df2;
    std::array<double, 4> g;
    Eigen::Matrix4d dg;
  };

  static Parts compute(const Vector& x) {
    const double x1 = x[0], x2 = x[1], x3 = x[2], x4 = x[3];
    const double d2 = x2 * x2 - x1 * x1;
    const double d3 = x2 * x2 * x2 - x1 * x1 * x1;
    const Eigen::RowVector4d dd2(-2.0 * x1, 2.0 * x2, 0.0, 0.0);
    const Eigen::RowVector4d dd3(-3.0 * x1 * x1, 3.0 * x2 * x2, 0.0, 0.0);

    // ratio = d2/d3 = s/q, inverse = d3/d2 = q/s
    const double s = x1 + x2;
    const double q = x1 * x1 + x1 * x2 + x2 * x2;
    const Eigen::RowVector4d ds(1.0, 1.0, 0.0, 0.0);
    const Eigen::RowVector4d dq(2.0 * x1 + x2, x1 + 2.0 * x2, 0.0, 0.0);
    const double ratio = s / q;
    const Eigen::RowVector4d dratio = (ds * q - s * dq) / (q * q);
    const double inverse = q / s;
    const Eigen::RowVector4d dinverse = (dq * s - q * ds) / (s * s);

    Parts p;
    p.f1 = 4.9e-5 * d2 * (x4 - 1.0);
    p.df1 = 4.9e-5 * (x4 - 1.0) * dd2;
    p.df1[3] += 4.9e-5 * d2;

    const double c2 = 9.82e6 / (x3 * x4);
    p.f2 = c2 * ratio;
    p.df2 = c2 * dratio;
    p.df2[2] += -p.f2 / x3;
    p.df2[3] += -p.f2 / x4;

    // g1 = (x2 - x1) - 20
    p.g[0] = (x2 - x1) - 20.0;
    p.dg.row(0) << -1.0, 1.0, 0.0, 0.0;

    // g2 = 0.4 - x3 / (3.14 d2)
    p.g[1] = 0.4 - x3 / (3.14 * d2);
    p.dg.row(1) = x3 * dd2 / (3.14 * d2 * d2);
    p.dg(1, 2) += -1.0 / (3.14 * d2);

    // g3 = 1 - 2.22e-3 x3 d3 / d2^2
    const double t3 = d3 / (d2 * d2);
    const Eigen::RowVector4d dt3 = dd3 / (d2 * d2) - 2.0 * d3 * dd2 / (d2 * d2 * d2);
    p.g[2] = 1.0 - 2.22e-3 * x3 * t3;
    p.dg.row(2) = -2.22e-3 * x3 * dt3;
    p.dg(2, 2) += -2.22e-3 * t3;

    // g4 = 2.66e-2 x3 x4 d3 / d2 - 900
    p.g[3] = 2.66e-2 * x3 * x4 * inverse - 900.0;
    p.dg.row(3) = 2.66e-2 * x3 * x4 * dinverse;
    p.dg(3, 2) += 2.66e-2 * x4 * inverse;
    p.dg(3, 3) += 2.66e-2 * x3 * inverse;
    return p;
  }
};

/**
 * Gear train: ratio error, largest gear and ratio-constraint violation.
 *
 * Teeth counts are integers in {12..60}; by default the problem is the
 * continuous relaxation over [12, 60]^4 and evaluate_rounded() reports the
 * integer design. Pass enforce_integrality = true to reject fractional input.
 */
class GearTrainProblem final : public Problem {
 public:
  static constexpr double kTargetRatio = 6.931;

  explicit GearTrainProblem(bool enforce_integrality = false)
      : Problem("RE36", "GearTrain", Vector::Constant(4, 12.0), Vector::Constant(4, 60.0), 3) {
    set_integer(std::vector<bool>(4, true), enforce_integrality);
  }

  [[nodiscard]] Vector evaluate_unchecked(const Vector& x) const override {
    const double ratio = x[2] * x[3] / (x[0] * x[1]);
    Vector f(3);
    f[0] = std::abs(kTargetRatio - ratio);
    f[1] = x.maxCoeff();
    f[2] = std::max(f[0] / kTargetRatio - 0.5, 0.0);  // max{-g1, 0}, g1 = 0.5 - f1/6.931
    return f;
  }

  [[nodiscard]] Matrix jacobian_unchecked(const Vector& x) const override {
    const double ratio = x[2] * x[3] / (x[0] * x[1]);
    const Eigen::RowVector4d dratio(-ratio / x[0], -ratio / x[1], ratio / x[2], ratio / x[3]);
    const double diff = kTargetRatio - ratio;
    const double sign = (diff > 0.0) ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);

    Matrix j = Matrix::Zero(3, 4);
    j.row(0) = -sign * dratio;
    Eigen::Index arg = 0;
    x.maxCoeff(&arg);  // first maximal index
    j(1, arg) = 1.0;
    if (std::abs(diff) / kTargetRatio - 0.5 > 0.0) j.row(2) = j.row(0) / kTargetRatio;
    return j;
  }
};

/// Rocket injector: three quadratic/cubic response surfaces over [0, 1]^4.
class RocketInjectorProblem final : public Problem {
 public:
  RocketInjectorProblem() : Problem("RE37", "RocketInjector", Vector::Zero(4), Vector::Ones(4), 3) {}

  [[nodiscard]] Vector evaluate_unchecked(const Vector& x) const override {
    Vector f(3);
    for (int k = 0; k < 3; ++k) {
      double total = 0.0;
      for (const auto& term : surfaces()[k]) total += term.coefficient * monomial(term, x);
      f[k] = total;
    }
    return f;
  }

  [[nodiscard]] Matrix jacobian_unchecked(const Vector& x) const override {
    Matrix j = Matrix::Zero(3, 4);
    for (int k = 0; k < 3; ++k) {
      for (const auto& term : surfaces()[k]) {
        for (int v = 0; v < 4; ++v) {
          const int p = term.power[v];
          if (p == 0) continue;
          double d = term.coefficient * p * std::pow(x[v], p - 1);
          for (int w = 0; w < 4; ++w) {
            if (w != v) d *= std::pow(x[w], term.power[w]);
          }
          j(k, v) += d;
        }
      }
    }
    return j;
  }

 private:
  struct Term {
    double coefficient;
    std::array<int, 4> power;
  };

  static double monomial(const Term& term, const Vector& x) {
    double value = 1.0;
    for (int v = 0; v < 4; ++v) {
      for (int p = 0; p < term.power[v]; ++p) value *= x[v];
    }
    return value;
  }

  static const std::array<std::vector<Term>, 3>& surfaces() {
    static const std::array<std::vector<Term>, 3> kSurfaces = {{
        {
            {0.692, {0, 0, 0, 0}},     {0.477, {1, 0, 0, 0}},    {-0.687, {0, 1, 0, 0}},   {-0.080, {0, 0, 1, 0}},
            {-0.0650, {0, 0, 0, 1}},   {-0.167, {2, 0, 0, 0}},   {-0.0129, {1, 1, 0, 0}},  {0.0796, {0, 2, 0, 0}},
            {-0.00634, {1, 0, 1, 0}},  {-0.0257, {0, 1, 1, 0}},  {0.0877, {0, 0, 2, 0}},   {-0.0521, {1, 0, 0, 1}},
            {0.00156, {0, 1, 0, 1}},   {0.00198, {0, 0, 1, 1}},  {0.0184, {0, 0, 0, 2}},
        },
        {
            {0.153, {0, 0, 0, 0}},     {0.322, {1, 0, 0, 0}},    {-0.396, {0, 1, 0, 0}},   {-0.424, {0, 0, 1, 0}},
            {-0.0226, {0, 0, 0, 1}},   {-0.175, {2, 0, 0, 0}},   {-0.0185, {1, 1, 0, 0}},  {0.0701, {0, 2, 0, 0}},
            {-0.251, {1, 0, 1, 0}},    {-0.179, {0, 1, 1, 0}},   {0.0150, {0, 0, 2, 0}},   {-0.0134, {1, 0, 0, 1}},
            {0.0296, {0, 1, 0, 1}},    {0.0752, {0, 0, 1, 1}},   {0.0192, {0, 0, 0, 2}},
        },
        {
            {0.370, {0, 0, 0, 0}},     {0.205, {1, 0, 0, 0}},    {-0.0307, {0, 1, 0, 0}},  {-0.108, {0, 0, 1, 0}},
            {-1.019, {0, 0, 0, 1}},    {-0.135, {2, 0, 0, 0}},   {-0.0141, {1, 1, 0, 0}},  {0.0998, {0, 2, 0, 0}},
            {-0.208, {1, 0, 1, 0}},    {-0.0301, {0, 1, 1, 0}},  {0.226, {0, 0, 2, 0}},    {-0.353, {1, 0, 0, 1}},
            {0.0497, {0, 0, 1, 1}},    {0.423, {0, 0, 0, 2}},    {0.202, {2, 1, 0, 0}},    {-0.281, {2, 0, 1, 0}},
            {-0.342, {1, 2, 0, 0}},    {-0.245, {0, 2, 1, 0}},   {0.281, {0, 1, 2, 0}},    {-0.184, {1, 0, 0, 2}},
            {-0.281, {1, 1, 1, 0}},
        },
    }};
    return kSurfaces;
  }
};

}  // namespace stch

#endif  // STCH_PROBLEMS_ENGINEERING_HPP
