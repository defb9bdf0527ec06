/**
 * @file race.hpp
 * @brief TCH vs STCH convergence race on the 1-D toy problem.
 *
 * Both methods start from the same seeded point in each trial. The gap of
 * iterate t is |f(x_t) - f(x*)|_2 where x* minimizes the Tchebycheff value
 * for the race preference (found by grid search); iterate t has used t + 1
 * evaluations.
 */

#ifndef STCH_EXPERIMENTS_RACE_HPP
#define STCH_EXPERIMENTS_RACE_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "stch/io.hpp"
#include "stch/problems/problem.hpp"
#include "stch/solvers/solve.hpp"

namespace stch {

struct RaceConfig {
  int trials = 100;
  int iterations = 10000;
  double mu = kDefaultMu;
  double stch_step = 0.25;
  /// TCH uses step_t = tch_step / sqrt(t).
  double tch_step = 0.25;
  Vector lambda = Vector::Constant(2, 0.5);
  Vector z_star = Vector::Constant(2, -kDefaultIdealOffset);
  std::uint64_t seed = 0;
  double oracle_resolution = 1e-6;

  void validate() const {
    detail::require(trials >= 1, "race needs at least one trial");
    detail::require(iterations >= 1, "race needs at least one iteration");
    detail::require(mu > 0.0, "race mu must be > 0");
    detail::require(stch_step > 0.0 && tch_step > 0.0, "race step sizes must be > 0");
    detail::require(lambda.size() == 2 && z_star.size() == 2, "race preference and ideal point have two entries");
    detail::require(oracle_resolution > 0.0, "oracle resolution must be > 0");
  }

  [[nodiscard]] HeaderBlock header() const {
    return {{"command", "race"},        {"problem", "toy"},
            {"trials", std::to_string(trials)},
            {"iterations", std::to_string(iterations)},
            {"mu", format_double(mu)},  {"stch_step", format_double(stch_step)},
            {"tch_step", format_double(tch_step)},
            {"tch_schedule", "inv_sqrt_t"},
            {"lambda", join(lambda, ';')},
            {"z_star", join(z_star, ';')},
            {"seed", std::to_string(seed)},
            {"version", kVersion}};
  }
};

/// x minimizing max_i lambda_i (f_i(x) - z*_i) on a uniform grid over the problem's 1-D box.
inline double race_oracle(const Problem& problem, const Vector& lambda, const Vector& z_star, double resolution) {
  detail::require(problem.n() == 1, "race oracle needs a 1-D problem");
  const double lo = problem.lower()[0];
  const double hi = problem.upper()[0];
  const auto steps = static_cast<std::int64_t>(std::llround((hi - lo) / resolution));
  double best_x = lo;
  double best = std::numeric_limits<double>::infinity();
  Vector x(1);
  for (std::int64_t k = 0; k <= steps; ++k) {
    x[0] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(steps);
    const Vector f = problem.evaluate_unchecked(x);
    const double v = lambda.cwiseProduct(f - z_star).maxCoeff();
    if (v < best) {
      best = v;
      best_x = x[0];
    }
  }
  return best_x;
}

struct RaceCurve {
  std::vector<double> mean;
  std::vector<double> median;
};

struct RaceResult {
  double x_star = 0.0;
  Vector f_star;
  /// Index k is evaluation count k + 1.
  RaceCurve tch;
  RaceCurve stch;

  [[nodiscard]] std::size_t points() const { return stch.mean.size(); }

  /// First evaluation count at which a mean-gap curve is <= threshold.
  static std::optional<std::int64_t> first_reach(const std::vector<double>& curve, double threshold) {
    for (std::size_t k = 0; k < curve.size(); ++k) {
      if (curve[k] <= threshold) return static_cast<std::int64_t>(k + 1);
    }
    return std::nullopt;
  }
};

namespace detail {

inline double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline RaceCurve summarize(const std::vector<std::vector<double>>& gaps_by_trial) {
  const std::size_t points = gaps_by_trial.front().size();
  RaceCurve curve;
  std::vector<double> column(gaps_by_trial.size());
  for (std::size_t k = 0; k < points; ++k) {
    double sum = 0.0;
    for (std::size_t t = 0; t < gaps_by_trial.size(); ++t) {
      column[t] = gaps_by_trial[t][k];
      sum += column[t];
    }
    curve.mean.push_back(sum / static_cast<double>(column.size()));
    curve.median.push_back(median_of(column));
  }
  return curve;
}

}  // namespace detail

/// Seed of trial k: every trial gets its own starting point.
inline std::uint64_t trial_seed(std::uint64_t seed, int trial) {
  return seed * 1000003ULL + static_cast<std::uint64_t>(trial);
}

inline RaceResult run_race(const RaceConfig& config) {
  config.validate();
  ToyProblem toy;
  RaceResult result;
  result.x_star = race_oracle(toy, config.lambda, config.z_star, config.oracle_resolution);
  result.f_star = toy.evaluate_unchecked(Vector::Constant(1, result.x_star));

  const auto stch_spec = ScalarizationSpec::make(ScalarizationKind::STCH, config.z_star, config.mu);
  const auto tch_spec = ScalarizationSpec::make(ScalarizationKind::TCH, config.z_star, config.mu);

  std::vector<std::vector<double>> stch_gaps;
  std::vector<std::vector<double>> tch_gaps;
  for (int trial = 0; trial < config.trials; ++trial) {
    SolveConfig sc;
    sc.max_iters = config.iterations;
    sc.seed = trial_seed(config.seed, trial);
    sc.tolerance = 0.0;  // fixed budget for both methods

    sc.step_size = config.stch_step;
    sc.schedule = StepSchedule::Constant;
    const auto stch_traj = solve_scalarized(toy, stch_spec, config.lambda, sc);

    sc.step_size = config.tch_step;
    sc.schedule = StepSchedule::InvSqrtT;
    const auto tch_traj = solve_scalarized(toy, tch_spec, config.lambda, sc);

    auto gaps = [&](const Trajectory& traj) {
      std::vector<double> g;
      g.reserve(traj.iterates.size());
      for (const auto& p : traj.iterates) g.push_back((p.f - result.f_star).norm());
      return g;
    };
    stch_gaps.push_back(gaps(stch_traj));
    tch_gaps.push_back(gaps(tch_traj));
  }
  result.stch = detail::summarize(stch_gaps);
  result.tch = detail::summarize(tch_gaps);
  return result;
}

/// CSV columns: evals, mean_gap_tch, median_gap_tch, mean_gap_stch, median_gap_stch.
inline std::string race_to_csv(const RaceResult& result, const HeaderBlock& header) {
  std::ostringstream os;
  write_header(os, header);
  os << "evals,mean_gap_tch,median_gap_tch,mean_gap_stch,median_gap_stch\n";
  for (std::size_t k = 0; k < result.points(); ++k) {
    os << (k + 1) << ',' << format_double(result.tch.mean[k]) << ',' << format_double(result.tch.median[k]) << ','
       << format_double(result.stch.mean[k]) << ',' << format_double(result.stch.median[k]) << '\n';
  }
  return os.str();
}

}  // namespace stch

#endif  // STCH_EXPERIMENTS_RACE_HPP
