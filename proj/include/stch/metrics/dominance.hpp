#ifndef STCH_METRICS_DOMINANCE_HPP
#define STCH_METRICS_DOMINANCE_HPP

#include <algorithm>
#include <cstddef>
#include <iterator>
#include <map>
#include <numeric>
#include <vector>

#include "stch/core.hpp"

namespace stch {

/// True when a <= b componentwise with at least one strict inequality (minimization).
inline bool dominates(const Vector& a, const Vector& b) {
  bool strictly_better = false;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
    if (a[i] < b[i]) strictly_better = true;
  }
  return strictly_better;
}

/// True when a < b in every component.
inline bool strictly_dominates(const Vector& a, const Vector& b) {
  return (a.array() < b.array()).all();
}

inline bool lexicographic_less(const Vector& a, const Vector& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

namespace detail {

inline bool same_point(const Vector& a, const Vector& b) { return (a.array() == b.array()).all(); }

// 3-D maxima by sweeping f1 and keeping a (f2, f3) staircase; O(N log N).
inline std::vector<std::size_t> nondominated_sweep3(const std::vector<Vector>& points,
                                                    const std::vector<std::size_t>& order) {
  std::vector<std::size_t> kept;
  std::map<double, double> stair;  // f2 ascending -> f3 strictly descending
  for (std::size_t idx : order) {
    const double b2 = points[idx][1];
    const double b3 = points[idx][2];
    auto it = stair.upper_bound(b2);
    if (it != stair.begin() && std::prev(it)->second <= b3) continue;
    it = stair.lower_bound(b2);
    while (it != stair.end() && it->second >= b3) it = stair.erase(it);
    stair.emplace(b2, b3);
    kept.push_back(idx);
  }
  return kept;
}

}  // namespace detail

/**
 * @brief Indices of the maximal non-dominated subset, ordered
 *        lexicographically by objective values. Exact duplicates keep the
 *        first occurrence.
 */
inline std::vector<std::size_t> nondominated_indices(const std::vector<Vector>& points) {
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (points.empty()) return order;
  const Eigen::Index m = points.front().size();
  for (const auto& p : points) detail::require_same_size(p.size(), m, "nondominated_filter");

  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return lexicographic_less(points[a], points[b]); });
  order.erase(std::unique(order.begin(), order.end(),
                          [&](std::size_t a, std::size_t b) { return detail::same_point(points[a], points[b]); }),
              order.end());

  if (m == 1) return {order.front()};
  if (m == 2) {
    std::vector<std::size_t> kept;
    double best_f2 = std::numeric_limits<double>::infinity();
    for (std::size_t idx : order) {
      if (points[idx][1] < best_f2) {
        kept.push_back(idx);
        best_f2 = points[idx][1];
      }
    }
    return kept;
  }
  if (m == 3) return detail::nondominated_sweep3(points, order);

  // lexicographic order guarantees every dominator precedes what it dominates
  std::vector<std::size_t> kept;
  for (std::size_t idx : order) {
    bool dominated = false;
    for (std::size_t k : kept) {
      if (dominates(points[k], points[idx])) {
        dominated = true;
        break;
      }
    }
    if (!dominated) kept.push_back(idx);
  }
  return kept;
}

inline std::vector<Vector> nondominated_filter(const std::vector<Vector>& points) {
  std::vector<Vector> out;
  for (std::size_t idx : nondominated_indices(points)) out.push_back(points[idx]);
  return out;
}

inline std::vector<ObjectiveVector> nondominated_filter(const std::vector<ObjectiveVector>& points) {
  std::vector<Vector> raw;
  raw.reserve(points.size());
  for (const auto& p : points) raw.push_back(p.values());
  std::vector<ObjectiveVector> out;
  for (std::size_t idx : nondominated_indices(raw)) out.push_back(points[idx]);
  return out;
}

/// True when no point dominates another.
inline bool is_mutually_nondominated(const std::vector<Vector>& points) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (i != j && dominates(points[i], points[j])) return false;
    }
  }
  return true;
}

}  // namespace stch

#endif  // STCH_METRICS_DOMINANCE_HPP
