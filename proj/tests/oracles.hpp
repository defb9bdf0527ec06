// Independent reference computations for the tests. Nothing here calls the
// library routine it is meant to check.

#ifndef STCH_TESTS_ORACLES_HPP
#define STCH_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// O(N^2) pairwise filter; keeps the first copy of duplicates, returns points in lexicographic order.
inline std::vector<Vector> brute_force_filter(const std::vector<Vector>& pts) {
  auto dom = [](const Vector& a, const Vector& b) {
    bool strict = false;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      if (a[i] > b[i]) return false;
      if (a[i] < b[i]) strict = true;
    }
    return strict;
  };
  std::vector<Vector> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool keep = true;
    for (std::size_t j = 0; j < pts.size() && keep; ++j) {
      if (j != i && dom(pts[j], pts[i])) keep = false;
      if (j < i && (pts[j].array() == pts[i].array()).all()) keep = false;
    }
    if (keep) out.push_back(pts[i]);
  }
  std::sort(out.begin(), out.end(), [](const Vector& a, const Vector& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  });
  return out;
}

/// Central finite-difference gradient of a scalar function.
inline Vector fd_gradient(const std::function<double(const Vector&)>& g, const Vector& x, double h) {
  Vector out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector xp = x;
    Vector xm = x;
    xp[i] += h;
    xm[i] -= h;
    out[i] = (g(xp) - g(xm)) / (2.0 * h);
  }
  return out;
}

/// Central finite-difference Jacobian (rows = outputs).
inline Matrix fd_jacobian(const std::function<Vector(const Vector&)>& f, const Vector& x, double h) {
  const Vector f0 = f(x);
  Matrix out(f0.size(), x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector xp = x;
    Vector xm = x;
    xp[i] += h;
    xm[i] -= h;
    out.col(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return out;
}

/// max_ij |a - b| / max(1, |b|)
inline double relative_error(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      worst = std::max(worst, std::abs(a(i, j) - b(i, j)) / std::max(1.0, std::abs(b(i, j))));
    }
  }
  return worst;
}

/// Smooth Tchebycheff value straight from the definition in long double, no max-shift.
inline long double stch_direct(const Vector& f, const Vector& lambda, const Vector& z, long double mu) {
  long double s = 0.0L;
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    s += std::exp(static_cast<long double>(lambda[i]) * (static_cast<long double>(f[i]) - z[i]) / mu);
  }
  return mu * std::log(s);
}

/**
 * Minimum of |sum_i a_i g_i|^2 over the 3-simplex: exhaustive grid at step
 * 1e-3, then three nested local grids (step 1e-4, 1e-5, 1e-6) around the best point.
 */
inline double min_norm_sq_grid3(const Matrix& g) {
  auto value = [&](double a, double b) {
    const double c = 1.0 - a - b;
    if (a < 0.0 || b < 0.0 || c < -1e-15) return std::numeric_limits<double>::infinity();
    return (a * g.row(0) + b * g.row(1) + std::max(c, 0.0) * g.row(2)).squaredNorm();
  };
  double best = std::numeric_limits<double>::infinity();
  double ba = 0.0;
  double bb = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    for (int j = 0; i + j <= 1000; ++j) {
      const double v = value(i * 1e-3, j * 1e-3);
      if (v < best) {
        best = v;
        ba = i * 1e-3;
        bb = j * 1e-3;
      }
    }
  }
  for (double step : {1e-4, 1e-5, 1e-6}) {
    const double ca = ba;
    const double cb = bb;
    for (int i = -20; i <= 20; ++i) {
      for (int j = -20; j <= 20; ++j) {
        const double a = ca + i * step;
        const double b = cb + j * step;
        const double v = value(a, b);
        if (v < best) {
          best = v;
          ba = a;
          bb = b;
        }
      }
    }
  }
  return best;
}

/// Uniform Monte Carlo hypervolume with its own sampler (fixed seed).
inline double mc_hypervolume(const std::vector<Vector>& pts, const Vector& ref, const Vector& lo, long samples,
                             unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  long hits = 0;
  Vector s(ref.size());
  for (long k = 0; k < samples; ++k) {
    for (Eigen::Index d = 0; d < ref.size(); ++d) s[d] = lo[d] + (ref[d] - lo[d]) * u(rng);
    for (const auto& p : pts) {
      if ((p.array() <= s.array()).all()) {
        ++hits;
        break;
      }
    }
  }
  return (ref - lo).prod() * static_cast<double>(hits) / static_cast<double>(samples);
}

/// Spearman rank correlation (no ties expected).
inline double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return v[x] < v[y]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size(); ++i) r[idx[i]] = static_cast<double>(i);
    return r;
  };
  const auto ra = ranks(a);
  const auto rb = ranks(b);
  const double n = static_cast<double>(a.size());
  double d2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d2 += (ra[i] - rb[i]) * (ra[i] - rb[i]);
  return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

}  // namespace oracle

#endif  // STCH_TESTS_ORACLES_HPP
