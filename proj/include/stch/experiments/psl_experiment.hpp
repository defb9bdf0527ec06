/**
 * @file psl_experiment.hpp
 * @brief One ΔHV measurement: train (or solve) for one problem, method and
 *        seed, sample 100 preferences and compare with the reference front.
 */

#ifndef STCH_EXPERIMENTS_PSL_EXPERIMENT_HPP
#define STCH_EXPERIMENTS_PSL_EXPERIMENT_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "stch/io.hpp"
#include "stch/metrics/archive.hpp"
#include "stch/problems/catalog.hpp"
#include "stch/problems/reference_front.hpp"
#include "stch/psl/preferences.hpp"
#include "stch/psl/train.hpp"
#include "stch/solvers/solve.hpp"

namespace stch {

/// Smoothing used for STCH Pareto set learning on benchmarks.
inline constexpr double kDefaultPslMu = 0.01;
inline constexpr int kDefaultFrontResolution = 1000;
/// MGDA baseline: independent solves per seed, each with an equal share of the evaluation budget.
inline constexpr int kMgdaSolvesPerSeed = 100;
inline constexpr double kMgdaStep = 0.1;

enum class Method { LS, TCH, STCH, MGDA };

inline std::string to_string(Method m) {
  switch (m) {
    case Method::LS:
      return "ls";
    case Method::TCH:
      return "tch";
    case Method::STCH:
      return "stch";
    case Method::MGDA:
      return "mgda";
  }
  return "unknown";
}

inline Method parse_method(const std::string& id) {
  if (id == "ls") return Method::LS;
  if (id == "tch") return Method::TCH;
  if (id == "stch") return Method::STCH;
  if (id == "mgda") return Method::MGDA;
  throw ContractViolation("unknown method id: " + id);
}

inline ScalarizationKind scalarization_of(Method m) {
  switch (m) {
    case Method::LS:
      return ScalarizationKind::LS;
    case Method::TCH:
      return ScalarizationKind::TCH;
    case Method::STCH:
      return ScalarizationKind::STCH;
    case Method::MGDA:
      break;
  }
  throw ContractViolation("mgda is not a scalarization");
}

struct PslSettings {
  double mu = kDefaultPslMu;
  int iterations = kDefaultPslIterations;
  int prefs_per_iter = kDefaultPrefsPerIter;
  OptimizerKind optimizer = OptimizerKind::Adam;
  double learning_rate = kDefaultPslLearningRate;
  int hidden = kDefaultHiddenWidth;
  int synthetic_dimension = kSyntheticDefaultDimension;
  int front_resolution = kDefaultFrontResolution;

  void validate() const {
    detail::require(mu > 0.0, "mu must be > 0");
    detail::require(iterations >= 1 && prefs_per_iter >= 1, "training budget must be positive");
    detail::require(learning_rate > 0.0, "learning rate must be > 0");
    detail::require(hidden >= 1, "hidden width must be >= 1");
    detail::require(synthetic_dimension >= 3, "synthetic dimension must be >= 3");
    detail::require(front_resolution >= 100, "front resolution must be >= 100");
  }

  [[nodiscard]] HeaderBlock header() const {
    return {{"mu", format_double(mu)},
            {"z_star", format_double(-kDefaultIdealOffset) + " (normalized)"},
            {"iterations", std::to_string(iterations)},
            {"prefs_per_iter", std::to_string(prefs_per_iter)},
            {"optimizer", to_string(optimizer)},
            {"learning_rate", format_double(learning_rate)},
            {"hidden", std::to_string(hidden)},
            {"synthetic_dimension", std::to_string(synthetic_dimension)},
            {"front_resolution", std::to_string(front_resolution)}};
  }
};

struct CellResult {
  std::string problem;
  Method method = Method::STCH;
  std::uint64_t seed = 0;
  DeltaHv dhv;
  /// Unfiltered solutions for the test preferences, in preference order.
  std::vector<ArchiveEntry> solutions;
  ParetoArchive archive;
  std::optional<TrainResult> training;
};

inline TrainConfig psl_train_config(Method method, const ReferenceFront& front, const PslSettings& s,
                                    std::uint64_t seed) {
  TrainConfig cfg;
  cfg.iterations = s.iterations;
  cfg.prefs_per_iter = s.prefs_per_iter;
  cfg.optimizer = s.optimizer;
  cfg.learning_rate = s.learning_rate;
  cfg.hidden = s.hidden;
  cfg.seed = seed;
  cfg.scalarization = benchmark_spec(scalarization_of(method), front, s.mu);
  return cfg;
}

/**
 * MGDA baseline on the unit-box view of the problem with normalized
 * objectives: kMgdaSolvesPerSeed solves from random starts, each with
 * iterations * prefs_per_iter / kMgdaSolvesPerSeed evaluations.
 */
inline std::vector<ArchiveEntry> mgda_solutions(const ProblemPtr& problem, const ReferenceFront& front,
                                                const PslSettings& s, std::uint64_t seed) {
  const UnitBoxProblem unit(problem);
  SolveConfig sc;
  sc.max_iters = std::max<int>(1, static_cast<int>(static_cast<std::int64_t>(s.iterations) * s.prefs_per_iter /
                                                    kMgdaSolvesPerSeed) -
                                      1);
  sc.step_size = kMgdaStep;
  sc.record_every = sc.max_iters;
  sc.tolerance = 1e-8;
  std::vector<ArchiveEntry> out;
  for (int k = 0; k < kMgdaSolvesPerSeed; ++k) {
    sc.seed = seed * 1000003ULL + static_cast<std::uint64_t>(k);
    const auto traj = solve_mgda(unit, sc, front.normalization());
    out.push_back({unit.to_inner(traj.last().x), traj.last().f});
  }
  return out;
}

/// Trains (or solves, for MGDA) one cell and measures ΔHV on the test preferences.
inline CellResult run_cell(const ProblemPtr& problem, const ReferenceFront& front, Method method,
                           const PslSettings& settings, std::uint64_t seed) {
  settings.validate();
  CellResult cell;
  cell.problem = problem->name();
  cell.method = method;
  cell.seed = seed;
  if (method == Method::MGDA) {
    cell.solutions = mgda_solutions(problem, front, settings, seed);
  } else {
    cell.training = train(*problem, psl_train_config(method, front, settings, seed));
    cell.solutions = evaluate_model(cell.training->model, *problem, test_preferences(problem->m()));
  }
  cell.archive = ParetoArchive(front.reference_point);
  std::vector<ArchiveEntry> finite;
  for (const auto& e : cell.solutions) {
    if (e.f.allFinite()) finite.push_back(e);
  }
  cell.archive.insert_all(std::move(finite));
  cell.dhv = delta_hv(cell.archive, front);
  return cell;
}

struct SeedSummary {
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t count = 0;
};

/// Mean and sample standard deviation (zero for a single value).
inline SeedSummary summarize_values(const std::vector<double>& values) {
  SeedSummary s;
  s.count = values.size();
  if (values.empty()) return s;
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

/// CSV of objective vectors, one row per solution, columns f1..fm.
inline std::string points_to_csv(const std::vector<Vector>& points, const HeaderBlock& header) {
  std::ostringstream os;
  write_header(os, header);
  if (points.empty()) return os.str();
  for (Eigen::Index i = 0; i < points.front().size(); ++i) os << (i ? "," : "") << 'f' << (i + 1);
  os << '\n';
  for (const auto& p : points) os << join(p) << '\n';
  return os.str();
}

inline std::string loss_history_to_csv(const std::vector<double>& history, const HeaderBlock& header) {
  std::ostringstream os;
  write_header(os, header);
  os << "iteration,loss\n";
  for (std::size_t i = 0; i < history.size(); ++i) os << i << ',' << format_double(history[i]) << '\n';
  return os.str();
}

}  // namespace stch

#endif  // STCH_EXPERIMENTS_PSL_EXPERIMENT_HPP
