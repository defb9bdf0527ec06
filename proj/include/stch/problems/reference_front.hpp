/**
 * @file reference_front.hpp
 * @brief Reference Pareto fronts: analytic for the synthetic problems and the
 *        toy, a non-dominated filter over a dense Halton scan of the decision
 *        box for the engineering problems.
 */

#ifndef STCH_PROBLEMS_REFERENCE_FRONT_HPP
#define STCH_PROBLEMS_REFERENCE_FRONT_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "stch/io.hpp"
#include "stch/metrics/dominance.hpp"
#include "stch/problems/problem.hpp"
#include "stch/problems/synthetic.hpp"
#include "stch/psl/preferences.hpp"

namespace stch {

enum class FrontSource { Analytic, DenseSweep };

inline std::string to_string(FrontSource s) { return s == FrontSource::Analytic ? "Analytic" : "DenseSweep"; }

/// Reference point in normalized objective space: nadir (1, ..., 1) scaled by 1.1.
inline constexpr double kReferencePointScale = 1.1;
/// Evaluations per unit of resolution for dense sweeps.
inline constexpr std::int64_t kSweepEvaluationsPerResolution = 1000;
/// Polishing runs on swept fronts.
inline constexpr double kPolishMu = 1e-3;
inline constexpr double kPolishIdealOffset = 0.1;
inline constexpr int kPolishIterations = 200;

/**
 * @brief A non-dominated approximation of a problem's Pareto front.
 *
 * `points` are raw objective values sorted lexicographically.
 * `reference_point` lives in the normalized space defined by the front's
 * bounding box, where every front point lies in [0, 1]^m.
 */
struct ReferenceFront {
  std::string problem;
  FrontSource source = FrontSource::Analytic;
  int resolution = 0;
  std::vector<Vector> points;
  Vector reference_point;

  [[nodiscard]] Eigen::Index m() const { return points.empty() ? 0 : points.front().size(); }

  [[nodiscard]] Vector ideal() const {
    Vector lo = points.front();
    for (const auto& p : points) lo = lo.cwiseMin(p);
    return lo;
  }
  [[nodiscard]] Vector nadir() const {
    Vector hi = points.front();
    for (const auto& p : points) hi = hi.cwiseMax(p);
    return hi;
  }
  /// Bounding-box normalization used for hypervolume and for PSL losses.
  [[nodiscard]] Normalization normalization() const { return Normalization(ideal(), nadir()); }

  [[nodiscard]] std::vector<Vector> normalized_points() const {
    const Normalization nm = normalization();
    std::vector<Vector> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(((p - nm.f_min).array() / nm.range().array()).matrix());
    return out;
  }
};

namespace detail {

inline double radical_inverse(std::uint64_t index, std::uint64_t base) {
  double inv = 1.0 / static_cast<double>(base);
  double factor = inv;
  double value = 0.0;
  while (index > 0) {
    value += static_cast<double>(index % base) * factor;
    index /= base;
    factor *= inv;
  }
  return value;
}

inline constexpr std::array<std::uint64_t, 12> kHaltonPrimes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

/// Point `index` (0-based) of the Halton sequence scaled into the box; index 0 maps to the sequence's first
/// non-trivial element.
inline Vector halton_point(std::uint64_t index, const Vector& lower, const Vector& upper) {
  require(lower.size() <= static_cast<Eigen::Index>(kHaltonPrimes.size()), "Halton sweep supports up to 12 variables");
  Vector x(lower.size());
  for (Eigen::Index d = 0; d < lower.size(); ++d) {
    const double u = radical_inverse(index + 1, kHaltonPrimes[static_cast<std::size_t>(d)]);
    x[d] = lower[d] + (upper[d] - lower[d]) * u;
  }
  return x;
}

/// A swept decision vector and its objectives.
struct SweepPoint {
  Vector x;
  Vector f;
};

inline std::vector<SweepPoint> nondominated_points(std::vector<SweepPoint> pts) {
  std::vector<Vector> fs;
  fs.reserve(pts.size());
  for (const auto& p : pts) fs.push_back(p.f);
  std::vector<SweepPoint> kept;
  for (auto i : nondominated_indices(fs)) kept.push_back(std::move(pts[i]));
  return kept;
}

inline std::vector<SweepPoint> sweep_chunk(const Problem& problem, std::uint64_t begin, std::uint64_t end) {
  std::vector<SweepPoint> values;
  values.reserve(static_cast<std::size_t>(end - begin));
  const Vector& lo = problem.lower();
  const Vector& hi = problem.upper();
  for (std::uint64_t i = begin; i < end; ++i) {
    Vector x = halton_point(i, lo, hi);
    Vector f = problem.evaluate_unchecked(x);
    if (f.allFinite()) values.push_back({std::move(x), std::move(f)});
  }
  return nondominated_points(std::move(values));
}

inline std::vector<SweepPoint> box_corners(const Problem& problem) {
  const int n = problem.n();
  std::vector<SweepPoint> corners;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    Vector x(n);
    for (int d = 0; d < n; ++d) x[d] = (mask >> d) & 1U ? problem.upper()[d] : problem.lower()[d];
    Vector f = problem.evaluate_unchecked(x);
    if (f.allFinite()) corners.push_back({std::move(x), std::move(f)});
  }
  return corners;
}

inline double stch_value(const Vector& fn, const Vector& lambda, double mu) {
  const Vector y = lambda.cwiseProduct((fn.array() + kPolishIdealOffset).matrix());
  const double y_max = y.maxCoeff();
  return y_max + mu * std::log((((y.array() - y_max) / mu).exp()).sum());
}

/**
 * Polishes a swept front with projected gradient descent on the smooth
 * Tchebycheff value (mu = 1e-3, objectives normalized by the sweep's bounding
 * box) for a lattice of preferences. Each run starts from the swept point
 * with the best Tchebycheff value, works in box-scaled coordinates and uses
 * Armijo backtracking. Every accepted iterate joins the candidate pool.
 */
inline std::vector<SweepPoint> polish(const Problem& problem, const std::vector<SweepPoint>& swept) {
  const int m = problem.m();
  Vector lo = swept.front().f;
  Vector hi = swept.front().f;
  for (const auto& p : swept) {
    lo = lo.cwiseMin(p.f);
    hi = hi.cwiseMax(p.f);
  }
  const Vector inv_range = (hi - lo).cwiseMax(1e-12).cwiseInverse();
  const Vector width = problem.upper() - problem.lower();
  auto normalized = [&](const Vector& f) -> Vector { return ((f - lo).array() * inv_range.array()).matrix(); };

  const std::vector<Vector> lambdas = simplex_lattice(m, m == 2 ? 199 : 20);

  std::vector<SweepPoint> found;
  for (const auto& lambda : lambdas) {
    std::size_t best = 0;
    double best_value = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < swept.size(); ++i) {
      const Vector y = lambda.cwiseProduct((normalized(swept[i].f).array() + kPolishIdealOffset).matrix());
      if (y.maxCoeff() < best_value) {
        best_value = y.maxCoeff();
        best = i;
      }
    }
    Vector x = swept[best].x;
    Vector f = swept[best].f;
    double value = stch_value(normalized(f), lambda, kPolishMu);
    double step = 0.1;
    for (int it = 0; it < kPolishIterations; ++it) {
      const Vector fn = normalized(f);
      const Vector y = lambda.cwiseProduct((fn.array() + kPolishIdealOffset).matrix());
      const Vector e = ((y.array() - y.maxCoeff()) / kPolishMu).exp().matrix();
      const Vector w = (lambda.array() * e.array() / e.sum() * inv_range.array()).matrix();
      const Matrix jac = problem.jacobian_unchecked(x);
      Vector g = Vector::Zero(x.size());
      for (int i = 0; i < m; ++i) {
        if (w[i] != 0.0) g += w[i] * jac.row(i).transpose();
      }
      const Vector gu = g.cwiseProduct(width);  // gradient in box-scaled coordinates
      if (!gu.allFinite() || gu.norm() == 0.0) break;
      bool accepted = false;
      for (int halving = 0; halving < 40; ++halving) {
        const Vector trial = (x - step * gu.cwiseProduct(width)).cwiseMax(problem.lower()).cwiseMin(problem.upper());
        const Vector ft = problem.evaluate_unchecked(trial);
        if (ft.allFinite()) {
          const double vt = stch_value(normalized(ft), lambda, kPolishMu);
          const double decrease = gu.dot((x - trial).cwiseQuotient(width));
          if (vt <= value - 1e-4 * decrease && vt < value) {
            x = trial;
            f = ft;
            value = vt;
            accepted = true;
            break;
          }
        }
        step *= 0.5;
      }
      if (!accepted) break;
      found.push_back({x, f});
      step = std::min(1.0, 2.0 * step);
    }
  }
  return found;
}

inline ReferenceFront finish_front(std::string name, FrontSource source, int resolution, std::vector<Vector> points) {
  ReferenceFront front;
  front.problem = std::move(name);
  front.source = source;
  front.resolution = resolution;
  front.points = nondominated_filter(points);
  require(!front.points.empty(), "reference front is empty");
  front.reference_point = Vector::Constant(front.points.front().size(), kReferencePointScale);
  return front;
}

}  // namespace detail

/// Analytic front of the toy problem: {(t^2, (t - 1)^2) : t in [0, 1]}.
inline ReferenceFront toy_reference_front(int resolution) {
  std::vector<Vector> pts;
  for (int i = 0; i < resolution; ++i) {
    const double t = static_cast<double>(i) / (resolution - 1);
    Vector f(2);
    f << t * t, (t - 1.0) * (t - 1.0);
    pts.push_back(f);
  }
  return detail::finish_front("toy", FrontSource::Analytic, resolution, std::move(pts));
}

/**
 * Dense sweep: evaluates resolution * 1000 Halton points (plus the box
 * corners) and keeps the non-dominated set, optionally polished by
 * detail::polish. Chunks run on `threads` workers and are merged in index
 * order before the final filter, so the result does not depend on
 * scheduling.
 */
inline ReferenceFront dense_sweep_front(const Problem& problem, int resolution, int threads = 1, bool polish = true) {
  const std::uint64_t budget = static_cast<std::uint64_t>(resolution) * kSweepEvaluationsPerResolution;
  const std::uint64_t workers = static_cast<std::uint64_t>(std::max(1, threads));
  const std::uint64_t chunks = std::max<std::uint64_t>(workers, budget / 100000 + 1);
  std::vector<std::vector<detail::SweepPoint>> partial(chunks);
  auto run = [&](std::uint64_t worker) {
    for (std::uint64_t c = worker; c < chunks; c += workers) {
      partial[c] = detail::sweep_chunk(problem, budget * c / chunks, budget * (c + 1) / chunks);
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (std::uint64_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  std::vector<detail::SweepPoint> merged = detail::box_corners(problem);
  for (auto& part : partial) merged.insert(merged.end(), part.begin(), part.end());
  merged = detail::nondominated_points(std::move(merged));
  if (polish) {
    auto refined = detail::polish(problem, merged);
    merged.insert(merged.end(), refined.begin(), refined.end());
  }
  std::vector<Vector> objectives;
  objectives.reserve(merged.size());
  for (auto& p : merged) objectives.push_back(std::move(p.f));
  return detail::finish_front(problem.name(), FrontSource::DenseSweep, resolution, std::move(objectives));
}

/**
 * @brief Reference front for any catalog problem.
 *
 * Synthetic problems (and the toy) get their analytic fronts sampled at
 * `resolution` points; everything else is swept.
 */
inline ReferenceFront reference_front(const Problem& problem, int resolution, int threads = 1) {
  detail::require(resolution >= 100, "reference front resolution must be >= 100");
  if (const auto* synthetic = dynamic_cast<const SyntheticProblem*>(&problem)) {
    std::vector<Vector> pts;
    for (int i = 0; i < resolution; ++i) pts.push_back(synthetic->front_point(static_cast<double>(i) / (resolution - 1)));
    return detail::finish_front(problem.name(), FrontSource::Analytic, resolution, std::move(pts));
  }
  if (dynamic_cast<const ToyProblem*>(&problem) != nullptr) return toy_reference_front(resolution);
  return dense_sweep_front(problem, resolution, threads);
}

// ---------------------------------------------------------------------------
// CSV cache

inline std::string front_to_csv(const ReferenceFront& front) {
  std::ostringstream os;
  write_header(os, {{"problem", front.problem},
                    {"source", to_string(front.source)},
                    {"resolution", std::to_string(front.resolution)},
                    {"reference_point", join(front.reference_point, ';')},
                    {"version", kVersion}});
  for (Eigen::Index i = 0; i < front.m(); ++i) os << (i ? "," : "") << 'f' << (i + 1);
  os << '\n';
  for (const auto& p : front.points) os << join(p) << '\n';
  return os.str();
}

inline ReferenceFront front_from_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  ReferenceFront front;
  front.problem = table.header_value("problem");
  front.source = table.header_value("source") == "Analytic" ? FrontSource::Analytic : FrontSource::DenseSweep;
  front.resolution = std::stoi(table.header_value("resolution"));
  front.reference_point = parse_vector(table.header_value("reference_point"), ';');
  for (const auto& row : table.rows) {
    Vector p(static_cast<Eigen::Index>(row.size()));
    for (std::size_t i = 0; i < row.size(); ++i) p[static_cast<Eigen::Index>(i)] = parse_double(row[i]);
    front.points.push_back(std::move(p));
  }
  detail::require(!front.points.empty(), "cached front " + path.string() + " has no points");
  return front;
}

inline std::filesystem::path front_cache_path(const std::filesystem::path& dir, const std::string& problem,
                                              int resolution) {
  return dir / (problem + "_r" + std::to_string(resolution) + ".csv");
}

/// Loads the cached front for (problem, resolution) or builds and caches it.
inline ReferenceFront load_or_build_front(const Problem& problem, int resolution, const std::filesystem::path& dir,
                                          int threads = 1) {
  const auto path = front_cache_path(dir, problem.name(), resolution);
  if (std::filesystem::exists(path)) return front_from_csv(path);
  ReferenceFront front = reference_front(problem, resolution, threads);
  write_file_atomically(path, front_to_csv(front));
  return front;
}

}  // namespace stch

#endif  // STCH_PROBLEMS_REFERENCE_FRONT_HPP
