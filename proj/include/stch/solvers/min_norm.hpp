#ifndef STCH_SOLVERS_MIN_NORM_HPP
#define STCH_SOLVERS_MIN_NORM_HPP

#include <algorithm>

#include "stch/core.hpp"

namespace stch {

inline constexpr int kMinNormMaxIters = 200;
inline constexpr double kMinNormGapTolerance = 1e-9;

/**
 * @brief Weights alpha on the simplex minimizing |sum_i alpha_i g_i|^2.
 *
 * `gradients` holds one gradient per row (m x n). Two objectives use the
 * closed-form clamped line search; three or more use Frank-Wolfe with away
 * steps and exact line search on the m x m Gram matrix, stopped at a duality
 * gap of 1e-9 or 200 iterations.
 */
inline Vector min_norm_weights(const Matrix& gradients) {
  const Eigen::Index m = gradients.rows();
  detail::require(m >= 2, "min_norm_weights needs at least two gradients");
  detail::require(gradients.allFinite(), "min_norm_weights needs finite gradients");

  if (m == 2) {
    const Vector g1 = gradients.row(0).transpose();
    const Vector g2 = gradients.row(1).transpose();
    const double denom = (g1 - g2).squaredNorm();
    Vector alpha(2);
    if (denom == 0.0) {
      alpha << 0.5, 0.5;
      return alpha;
    }
    const double a = std::clamp((g2 - g1).dot(g2) / denom, 0.0, 1.0);
    alpha << a, 1.0 - a;
    return alpha;
  }

  const Matrix q = gradients * gradients.transpose();
  Eigen::Index start = 0;
  q.diagonal().minCoeff(&start);
  Vector alpha = Vector::Zero(m);
  alpha[start] = 1.0;

  for (int it = 0; it < kMinNormMaxIters; ++it) {
    const Vector qa = q * alpha;  // half the gradient of alpha' Q alpha
    Eigen::Index s = 0;
    qa.minCoeff(&s);
    const double base = alpha.dot(qa);
    const double gap = 2.0 * (base - qa[s]);
    if (gap <= kMinNormGapTolerance) break;

    Eigen::Index away = -1;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (alpha[i] > 0.0 && (away < 0 || qa[i] > qa[away])) away = i;
    }

    Vector d;
    double gamma_max = 1.0;
    if (base - qa[s] >= qa[away] - base || alpha[away] >= 1.0) {
      d = -alpha;
      d[s] += 1.0;
    } else {
      d = alpha;
      d[away] -= 1.0;
      gamma_max = alpha[away] / (1.0 - alpha[away]);
    }

    const double slope = d.dot(qa);
    const double curvature = d.dot(q * d);
    double gamma = gamma_max;
    if (curvature > 0.0) gamma = std::clamp(-slope / curvature, 0.0, gamma_max);
    if (gamma <= 0.0) break;
    alpha += gamma * d;
    alpha = alpha.cwiseMax(0.0);
    alpha /= alpha.sum();
  }
  return alpha;
}

/// Euclidean norm of the min-norm element of the convex hull of the rows.
inline double min_norm_residual(const Matrix& gradients) {
  return (gradients.transpose() * min_norm_weights(gradients)).norm();
}

}  // namespace stch

#endif  // STCH_SOLVERS_MIN_NORM_HPP
