#ifndef STCH_PSL_PREFERENCES_HPP
#define STCH_PSL_PREFERENCES_HPP

#include <functional>
#include <vector>

#include "stch/core.hpp"

namespace stch {

/// Das-Dennis simplex lattice: every lambda with entries k/H summing to 1, in lexicographic order of the counts.
inline std::vector<Vector> simplex_lattice(int m, int divisions) {
  detail::require(m >= 2 && divisions >= 1, "simplex lattice needs m >= 2 and divisions >= 1");
  std::vector<Vector> out;
  std::vector<int> counts(static_cast<std::size_t>(m), 0);
  std::function<void(int, int)> fill = [&](int pos, int left) {
    if (pos == m - 1) {
      counts[static_cast<std::size_t>(pos)] = left;
      Vector v(m);
      for (int i = 0; i < m; ++i) v[i] = static_cast<double>(counts[static_cast<std::size_t>(i)]) / divisions;
      out.push_back(v);
      return;
    }
    for (int c = left; c >= 0; --c) {
      counts[static_cast<std::size_t>(pos)] = c;
      fill(pos + 1, left - c);
    }
  };
  fill(0, divisions);
  return out;
}

/**
 * Test preferences for front sampling: 100 evenly spaced lambda_1 = 1 - i/99
 * for two objectives (so lambda_1 decreases and f1 increases along the
 * list), the 91-point lattice with H = 12 for three.
 */
inline std::vector<Vector> test_preferences(int m, int count = 100) {
  if (m == 2) {
    std::vector<Vector> out;
    for (int i = 0; i < count; ++i) {
      const double t = static_cast<double>(i) / (count - 1);
      Vector v(2);
      v << 1.0 - t, t;
      out.push_back(v);
    }
    return out;
  }
  detail::require(m == 3, "test preferences are defined for 2 or 3 objectives");
  return simplex_lattice(3, 12);
}

}  // namespace stch

#endif  // STCH_PSL_PREFERENCES_HPP
