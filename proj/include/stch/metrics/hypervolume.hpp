/**
 * @file hypervolume.hpp
 * @brief Exact hypervolume for two and three objectives plus a Monte Carlo
 *        estimator used to cross-check them.
 *
 * Points that do not strictly dominate the reference point contribute
 * nothing; use count_outside_reference() to report how many were dropped.
 */

#ifndef STCH_METRICS_HYPERVOLUME_HPP
#define STCH_METRICS_HYPERVOLUME_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <map>
#include <random>
#include <vector>

#include "stch/core.hpp"
#include "stch/metrics/dominance.hpp"

namespace stch {

inline std::size_t count_outside_reference(const std::vector<Vector>& points, const Vector& ref) {
  return static_cast<std::size_t>(std::count_if(points.begin(), points.end(),
                                                [&](const Vector& p) { return !strictly_dominates(p, ref); }));
}

namespace detail {

inline std::vector<Vector> inside_reference(const std::vector<Vector>& points, const Vector& ref) {
  std::vector<Vector> kept;
  kept.reserve(points.size());
  for (const auto& p : points) {
    require_same_size(p.size(), ref.size(), "hypervolume");
    if (strictly_dominates(p, ref)) kept.push_back(p);
  }
  return kept;
}

/**
 * 2-D staircase with incrementally maintained dominated area. Keys are f1,
 * values f2; f2 strictly decreases as f1 increases.
 */
class Staircase2D {
 public:
  Staircase2D(double r1, double r2) : r1_(r1), r2_(r2) {}

  void insert(double p1, double p2) {
    auto right = steps_.upper_bound(p1);
    double level = r2_;
    if (right != steps_.begin()) {
      auto left = std::prev(right);
      if (left->second <= p2) return;  // weakly dominated
      level = left->second;
      if (left->first == p1) steps_.erase(left);
    }
    double cursor = p1;
    auto it = steps_.upper_bound(p1);
    while (it != steps_.end()) {
      area_ += (it->first - cursor) * (level - p2);
      if (it->second < p2) {
        cursor = r1_;  // remainder already covered below p2
        break;
      }
      cursor = it->first;
      level = it->second;
      it = steps_.erase(it);
    }
    if (cursor < r1_) area_ += (r1_ - cursor) * (level - p2);
    steps_.emplace(p1, p2);
  }

  [[nodiscard]] double area() const { return area_; }

 private:
  double r1_;
  double r2_;
  double area_ = 0.0;
  std::map<double, double> steps_;
};

}  // namespace detail

/**
 * Exact 2-D hypervolume by a sweep over f1: sum of
 * (next_f1 - f1_i) * (ref2 - best f2 so far), with next_f1 = ref1 at the end.
 */
inline double hypervolume_2d(const std::vector<Vector>& points, const Vector& ref) {
  detail::require(ref.size() == 2, "hypervolume_2d needs a 2-D reference point");
  auto pts = detail::inside_reference(points, ref);
  if (pts.empty()) return 0.0;
  std::sort(pts.begin(), pts.end(), lexicographic_less);
  double volume = 0.0;
  double best_f2 = ref[1];
  for (std::size_t i = 0; i < pts.size(); ++i) {
    best_f2 = std::min(best_f2, pts[i][1]);
    const double next_f1 = (i + 1 < pts.size()) ? pts[i + 1][0] : ref[0];
    volume += (next_f1 - pts[i][0]) * (ref[1] - best_f2);
  }
  return volume;
}

/**
 * @brief Exact 3-D hypervolume by slicing along f3.
 *
 * Points are visited in increasing f3; after each insertion the dominated
 * area of the active (f1, f2) staircase is multiplied by the slab height up
 * to the next f3 (or ref3). The staircase area is updated incrementally, so
 * the whole sweep is O(N log N).
 */
inline double hypervolume_3d(const std::vector<Vector>& points, const Vector& ref) {
  detail::require(ref.size() == 3, "hypervolume_3d needs a 3-D reference point");
  auto pts = detail::inside_reference(points, ref);
  if (pts.empty()) return 0.0;
  std::sort(pts.begin(), pts.end(), [](const Vector& a, const Vector& b) {
    if (a[2] != b[2]) return a[2] < b[2];
    return lexicographic_less(a, b);
  });
  detail::Staircase2D slice(ref[0], ref[1]);
  double volume = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    slice.insert(pts[i][0], pts[i][1]);
    const double next_f3 = (i + 1 < pts.size()) ? pts[i + 1][2] : ref[2];
    volume += slice.area() * (next_f3 - pts[i][2]);
  }
  return volume;
}

/// Dispatches on the number of objectives (2 or 3).
inline double hypervolume(const std::vector<Vector>& points, const Vector& ref) {
  if (ref.size() == 2) return hypervolume_2d(points, ref);
  if (ref.size() == 3) return hypervolume_3d(points, ref);
  throw ContractViolation("exact hypervolume is implemented for 2 and 3 objectives only");
}

struct MonteCarloEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
};

/**
 * Uniform sampling in the box [min corner of the points, ref]; the dominated
 * fraction times the box volume estimates the hypervolume.
 */
inline MonteCarloEstimate hypervolume_mc(const std::vector<Vector>& points, const Vector& ref, std::int64_t samples,
                                         std::uint64_t seed) {
  detail::require(samples >= 10000, "hypervolume_mc needs at least 1e4 samples");
  auto pts = detail::inside_reference(points, ref);
  if (pts.empty()) return {0.0, 0.0};
  const Eigen::Index m = ref.size();
  Vector lo = pts.front();
  for (const auto& p : pts) lo = lo.cwiseMin(p);
  const Vector extent = ref - lo;
  detail::require((extent.array() > 0.0).all(), "degenerate Monte Carlo box");
  const double box_volume = extent.prod();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> sample(static_cast<std::size_t>(m));
  std::int64_t hits = 0;
  for (std::int64_t s = 0; s < samples; ++s) {
    for (Eigen::Index d = 0; d < m; ++d) sample[d] = lo[d] + extent[d] * unit(rng);
    for (const auto& p : pts) {
      bool covered = true;
      for (Eigen::Index d = 0; d < m; ++d) {
        if (p[d] > sample[d]) {
          covered = false;
          break;
        }
      }
      if (covered) {
        ++hits;
        break;
      }
    }
  }
  const double frac = static_cast<double>(hits) / static_cast<double>(samples);
  return {frac * box_volume, box_volume * std::sqrt(frac * (1.0 - frac) / static_cast<double>(samples))};
}

}  // namespace stch

#endif  // STCH_METRICS_HYPERVOLUME_HPP
