/**
 * @file synthetic.hpp
 * @brief The six synthetic bi-objective benchmarks F1-F6.
 *
 * All share the structure
 *   f1 = (1 + s1/|J1|) x1
 *   f2 = h * shape(x1 / h),  h = 1 + s2/|J2|
 * where s1 (s2) sums squared deviations of the odd (even) coupling variables
 * x_j, 2 <= j <= n (1-based), from a target c_j(x1). F1-F3 use the convex
 * shape 1 - sqrt(.), F4-F6 the concave shape 1 - (.)^2.
 */

#ifndef STCH_PROBLEMS_SYNTHETIC_HPP
#define STCH_PROBLEMS_SYNTHETIC_HPP

#include <cmath>
#include <numbers>
#include <string>

#include "stch/problems/problem.hpp"

namespace stch {

enum class CouplingKind { Quadratic, Power, Sine };
enum class FrontShape { Convex, Concave };

/// Default decision dimension for F1-F6.
inline constexpr int kSyntheticDefaultDimension = 20;

class SyntheticProblem final : public Problem {
 public:
  /// Partial derivatives that contain sqrt(x1) or x1^(p-1) are evaluated at
  /// max(x1, kBoundaryFloor) so the Jacobian stays finite on the x1 = 0 face.
  static constexpr double kBoundaryFloor = 1e-12;

  SyntheticProblem(std::string name, CouplingKind coupling, FrontShape shape, int n = kSyntheticDefaultDimension)
      : Problem(name, name, make_lower(coupling, n), Vector::Ones(n), 2), coupling_(coupling), shape_(shape) {
    detail::require(n >= 3, "synthetic problems need n >= 3");
  }

  [[nodiscard]] CouplingKind coupling() const { return coupling_; }
  [[nodiscard]] FrontShape shape() const { return shape_; }

  /// Coupling target c_j(x1) for 1-based index j.
  [[nodiscard]] double target(double x1, int j) const {
    const double nn = n();
    switch (coupling_) {
      case CouplingKind::Quadratic:
        return (2.0 * x1 - 1.0) * (2.0 * x1 - 1.0);
      case CouplingKind::Power:
        return std::pow(x1, exponent(j));
      case CouplingKind::Sine:
        return std::sin(4.0 * std::numbers::pi * x1 + j * std::numbers::pi / nn);
    }
    return 0.0;
  }

  /// Decision vector with every coupling variable on target: s1 = s2 = 0.
  [[nodiscard]] Vector zero_penalty_decision(double x1) const {
    Vector x(n());
    x[0] = x1;
    for (int j = 2; j <= n(); ++j) x[j - 1] = target(x1, j);
    return x;
  }

  /// Front point (t, 1 - sqrt t) or (t, 1 - t^2).
  [[nodiscard]] Vector front_point(double t) const {
    Vector f(2);
    f << t, (shape_ == FrontShape::Convex) ? 1.0 - std::sqrt(t) : 1.0 - t * t;
    return f;
  }

  [[nodiscard]] Vector evaluate_unchecked(const Vector& x) const override {
    const Terms t = terms(x);
    Vector f(2);
    f[0] = t.a * x[0];
    f[1] = (shape_ == FrontShape::Convex) ? t.h - std::sqrt(x[0] * t.h) : t.h - x[0] * x[0] / t.h;
    return f;
  }

  [[nodiscard]] Matrix jacobian_unchecked(const Vector& x) const override {
    const int nn = n();
    const double x1 = x[0];
    const Terms t = terms(x);
    const double count1 = odd_count();
    const double count2 = even_count();

    // d a / d x and d h / d x
    Vector da = Vector::Zero(nn);
    Vector dh = Vector::Zero(nn);
    for (int j = 2; j <= nn; ++j) {
      const double dev = x[j - 1] - target(x1, j);
      const double dtarget = target_derivative(x1, j);
      if (j % 2 == 1) {
        da[j - 1] = 2.0 * dev / count1;
        da[0] += -2.0 * dev * dtarget / count1;
      } else {
        dh[j - 1] = 2.0 * dev / count2;
        dh[0] += -2.0 * dev * dtarget / count2;
      }
    }

    Matrix jac(2, nn);
    jac.row(0) = x1 * da.transpose();
    jac(0, 0) += t.a;

    double df2_dh = 0.0;
    double df2_dx1 = 0.0;
    if (shape_ == FrontShape::Convex) {
      // f2 = h - sqrt(x1 h)
      const double x1f = std::max(x1, kBoundaryFloor);
      df2_dh = 1.0 - 0.5 * std::sqrt(x1 / t.h);
      df2_dx1 = -0.5 * std::sqrt(t.h / x1f);
    } else {
      // f2 = h - x1^2 / h
      df2_dh = 1.0 + x1 * x1 / (t.h * t.h);
      df2_dx1 = -2.0 * x1 / t.h;
    }
    jac.row(1) = df2_dh * dh.transpose();
    jac(1, 0) += df2_dx1;
    return jac;
  }

 private:
  struct Terms {
    double a;  // 1 + s1/|J1|
    double h;  // 1 + s2/|J2|
  };

  static Vector make_lower(CouplingKind coupling, int n) {
    Vector lo = Vector::Zero(n);
    if (coupling == CouplingKind::Sine) lo.tail(n - 1).setConstant(-1.0);
    return lo;
  }

  [[nodiscard]] int odd_count() const { return (n() - 1) / 2; }  // odd j in [2, n]
  [[nodiscard]] int even_count() const { return n() / 2; }       // even j in [2, n]

  [[nodiscard]] double exponent(int j) const { return 0.5 * (1.0 + 3.0 * (j - 2) / (n() - 2.0)); }

  [[nodiscard]] double target_derivative(double x1, int j) const {
    switch (coupling_) {
      case CouplingKind::Quadratic:
        return 4.0 * (2.0 * x1 - 1.0);
      case CouplingKind::Power: {
        const double p = exponent(j);
        return p * std::pow(std::max(x1, kBoundaryFloor), p - 1.0);
      }
      case CouplingKind::Sine:
        return 4.0 * std::numbers::pi * std::cos(4.0 * std::numbers::pi * x1 + j * std::numbers::pi / n());
    }
    return 0.0;
  }

  [[nodiscard]] Terms terms(const Vector& x) const {
    double s1 = 0.0;
    double s2 = 0.0;
    for (int j = 2; j <= n(); ++j) {
      const double dev = x[j - 1] - target(x[0], j);
      (j % 2 == 1 ? s1 : s2) += dev * dev;
    }
    return {1.0 + s1 / odd_count(), 1.0 + s2 / even_count()};
  }

  CouplingKind coupling_;
  FrontShape shape_;
};

/// F1..F6 by index (1-based).
inline std::shared_ptr<SyntheticProblem> make_synthetic(int index, int n = kSyntheticDefaultDimension) {
  detail::require(index >= 1 && index <= 6, "synthetic problem index must be in 1..6");
  static constexpr CouplingKind kCoupling[] = {CouplingKind::Quadratic, CouplingKind::Power, CouplingKind::Sine};
  const auto coupling = kCoupling[(index - 1) % 3];
  const auto shape = index <= 3 ? FrontShape::Convex : FrontShape::Concave;
  return std::make_shared<SyntheticProblem>("F" + std::to_string(index), coupling, shape, n);
}

}  // namespace stch

#endif  // STCH_PROBLEMS_SYNTHETIC_HPP
