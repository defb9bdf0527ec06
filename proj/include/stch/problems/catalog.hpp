#ifndef STCH_PROBLEMS_CATALOG_HPP
#define STCH_PROBLEMS_CATALOG_HPP

#include <algorithm>
#include <cctype>
#include <string>
#include <vector>

#include "stch/problems/engineering.hpp"
#include "stch/problems/problem.hpp"
#include "stch/problems/synthetic.hpp"

namespace stch {

/// The eleven benchmark problems in table order: F1-F6, RE21, RE24, RE33, RE36, RE37.
inline std::vector<ProblemPtr> list_problems(int synthetic_dimension = kSyntheticDefaultDimension) {
  std::vector<ProblemPtr> out;
  for (int i = 1; i <= 6; ++i) out.push_back(make_synthetic(i, synthetic_dimension));
  out.push_back(std::make_shared<BarTrussProblem>());
  out.push_back(std::make_shared<HatchCoverProblem>());
  out.push_back(std::make_shared<DiskBrakeProblem>());
  out.push_back(std::make_shared<GearTrainProblem>());
  out.push_back(std::make_shared<RocketInjectorProblem>());
  return out;
}

namespace detail {

inline std::string lower_case(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace detail

/**
 * Looks a problem up by id ("F3", "RE33") or label ("DiskBrake"),
 * case-insensitively. "toy" selects the convex race problem, which is not
 * part of the benchmark list.
 */
inline ProblemPtr make_problem(const std::string& id, int synthetic_dimension = kSyntheticDefaultDimension) {
  const std::string key = detail::lower_case(id);
  if (key == "toy") return std::make_shared<ToyProblem>();
  for (auto& p : list_problems(synthetic_dimension)) {
    if (detail::lower_case(p->name()) == key || detail::lower_case(p->label()) == key) return p;
  }
  throw ContractViolation("unknown problem id: " + id);
}

inline bool is_known_problem(const std::string& id) {
  try {
    make_problem(id);
    return true;
  } catch (const ContractViolation&) {
    return false;
  }
}

}  // namespace stch

#endif  // STCH_PROBLEMS_CATALOG_HPP
