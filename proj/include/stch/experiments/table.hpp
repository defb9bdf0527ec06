/**
 * @file table.hpp
 * @brief ΔHV table over problems x methods x seeds with per-cell result
 *        caching and a worker pool.
 */

#ifndef STCH_EXPERIMENTS_TABLE_HPP
#define STCH_EXPERIMENTS_TABLE_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "stch/experiments/psl_experiment.hpp"
#include "stch/io.hpp"
#include "stch/problems/catalog.hpp"
#include "stch/problems/reference_front.hpp"

namespace stch {

enum class Budget { Full, Desk };

inline Budget parse_budget(const std::string& id) {
  if (id == "full") return Budget::Full;
  if (id == "desk") return Budget::Desk;
  throw ContractViolation("unknown budget: " + id + " (expected full or desk)");
}

inline std::string to_string(Budget b) { return b == Budget::Full ? "full" : "desk"; }

inline constexpr int kFullSeeds = 30;

struct TableConfig {
  std::vector<std::string> problems;
  std::vector<Method> methods{Method::LS, Method::TCH, Method::STCH};
  int seeds = kFullSeeds;
  std::uint64_t base_seed = 0;
  PslSettings settings;
  int workers = 1;
  std::filesystem::path front_dir = "fronts";
  std::filesystem::path cell_dir = "cells";

  /// Desk budget: iterations / 4 and seeds / 3.
  void apply_budget(Budget b) {
    if (b == Budget::Desk) {
      settings.iterations = std::max(1, settings.iterations / 4);
      seeds = std::max(1, seeds / 3);
    }
  }

  void validate() const {
    settings.validate();
    detail::require(!problems.empty(), "table needs at least one problem");
    for (const auto& p : problems) detail::require(is_known_problem(p), "unknown problem id: " + p);
    detail::require(!methods.empty(), "table needs at least one method");
    detail::require(seeds >= 1, "table needs at least one seed");
    detail::require(workers >= 1, "workers must be >= 1");
  }

  [[nodiscard]] HeaderBlock header() const {
    HeaderBlock h{{"command", "table"}};
    std::string ps;
    for (const auto& p : problems) ps += (ps.empty() ? "" : ";") + p;
    std::string ms;
    for (auto m : methods) ms += (ms.empty() ? "" : ";") + to_string(m);
    h.emplace_back("problems", ps);
    h.emplace_back("methods", ms);
    h.emplace_back("seeds", std::to_string(seeds));
    h.emplace_back("base_seed", std::to_string(base_seed));
    for (auto& kv : settings.header()) h.push_back(kv);
    h.emplace_back("version", kVersion);
    return h;
  }
};

/// Seed used for seed index k; shared by all methods so they see the same streams.
inline std::uint64_t cell_seed(std::uint64_t base_seed, int k) { return base_seed + static_cast<std::uint64_t>(k); }

struct CellRecord {
  std::string problem;
  Method method = Method::STCH;
  std::uint64_t seed = 0;
  bool ok = false;
  double dhv = 0.0;
  std::size_t dropped = 0;
  std::string error;
};

struct TableRow {
  std::string problem;
  Method method = Method::STCH;
  SeedSummary summary;
};

struct TableResult {
  std::vector<CellRecord> cells;
  std::vector<TableRow> rows;

  [[nodiscard]] std::optional<TableRow> row(const std::string& problem, Method method) const {
    for (const auto& r : rows) {
      if (r.problem == problem && r.method == method && r.summary.count > 0) return r;
    }
    return std::nullopt;
  }

  /// Problems where STCH's mean ΔHV is strictly below both TCH's and LS's.
  [[nodiscard]] std::vector<std::string> stch_wins() const {
    std::vector<std::string> wins;
    std::vector<std::string> seen;
    for (const auto& r : rows) {
      if (std::find(seen.begin(), seen.end(), r.problem) != seen.end()) continue;
      seen.push_back(r.problem);
      const auto s = row(r.problem, Method::STCH);
      const auto t = row(r.problem, Method::TCH);
      const auto l = row(r.problem, Method::LS);
      if (s && t && l && s->summary.mean < t->summary.mean && s->summary.mean < l->summary.mean) {
        wins.push_back(r.problem);
      }
    }
    return wins;
  }
};

namespace detail {

/// 64-bit FNV-1a; stable across platforms, used to key cached cells by configuration.
inline std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string settings_key(const PslSettings& s) {
  std::ostringstream os;
  write_header(os, s.header());
  os << kVersion;
  std::ostringstream hex;
  hex << std::hex << fnv1a(os.str());
  return hex.str();
}

inline std::filesystem::path cell_path(const TableConfig& c, const std::string& problem, Method method,
                                       std::uint64_t seed) {
  return c.cell_dir / (problem + "_" + to_string(method) + "_s" + std::to_string(seed) + "_" +
                       settings_key(c.settings) + ".csv");
}

inline std::string cell_to_csv(const CellRecord& r, const PslSettings& s) {
  std::ostringstream os;
  write_header(os, s.header());
  os << "problem,method,seed,dhv,dropped\n";
  os << r.problem << ',' << to_string(r.method) << ',' << r.seed << ',' << format_double(r.dhv) << ',' << r.dropped
     << '\n';
  return os.str();
}

inline std::optional<CellRecord> load_cell(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) return std::nullopt;
  const CsvTable t = read_csv(path);
  if (t.rows.size() != 1 || t.rows.front().size() != 5) return std::nullopt;
  const auto& row = t.rows.front();
  CellRecord r;
  r.problem = row[0];
  r.method = parse_method(row[1]);
  r.seed = std::stoull(row[2]);
  r.dhv = parse_double(row[3]);
  r.dropped = static_cast<std::size_t>(std::stoull(row[4]));
  r.ok = true;
  return r;
}

}  // namespace detail

using ProgressFn = std::function<void(const CellRecord&, bool cached)>;

/**
 * Runs every (problem, method, seed) cell, reusing cached cells, with up to
 * `workers` threads. Results are collected by cell index, so the output does
 * not depend on scheduling. A failing cell is recorded and the run goes on.
 */
inline TableResult run_table(const TableConfig& config, const ProgressFn& progress = {}) {
  config.validate();
  std::map<std::string, ProblemPtr> problems;
  std::map<std::string, ReferenceFront> fronts;
  for (const auto& id : config.problems) {
    auto p = make_problem(id, config.settings.synthetic_dimension);
    fronts.emplace(p->name(), load_or_build_front(*p, config.settings.front_resolution, config.front_dir));
    problems.emplace(p->name(), std::move(p));
  }

  std::vector<CellRecord> cells;
  for (const auto& id : config.problems) {
    const std::string name = make_problem(id, config.settings.synthetic_dimension)->name();
    for (auto method : config.methods) {
      for (int k = 0; k < config.seeds; ++k) {
        CellRecord r;
        r.problem = name;
        r.method = method;
        r.seed = cell_seed(config.base_seed, k);
        cells.push_back(r);
      }
    }
  }

  std::atomic<std::size_t> next{0};
  std::mutex report;
  auto work = [&]() {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      CellRecord& r = cells[i];
      const auto path = detail::cell_path(config, r.problem, r.method, r.seed);
      bool cached = false;
      if (auto hit = detail::load_cell(path)) {
        r = *hit;
        cached = true;
      } else {
        try {
          const auto cell = run_cell(problems.at(r.problem), fronts.at(r.problem), r.method, config.settings, r.seed);
          r.dhv = cell.dhv.delta;
          r.dropped = cell.dhv.dropped;
          r.ok = true;
          write_file_atomically(path, detail::cell_to_csv(r, config.settings));
        } catch (const std::exception& e) {
          r.ok = false;
          r.error = e.what();
        }
      }
      if (progress) {
        std::lock_guard<std::mutex> lock(report);
        progress(r, cached);
      }
    }
  };
  const int workers = std::min<int>(config.workers, static_cast<int>(cells.size()));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  TableResult result;
  result.cells = cells;
  for (const auto& id : config.problems) {
    const std::string name = make_problem(id, config.settings.synthetic_dimension)->name();
    for (auto method : config.methods) {
      std::vector<double> values;
      for (const auto& c : cells) {
        if (c.problem == name && c.method == method && c.ok) values.push_back(c.dhv);
      }
      result.rows.push_back({name, method, summarize_values(values)});
    }
  }
  return result;
}

/// Aggregated CSV: problem, method, mean_dhv, std_dhv, n_seeds. Failed cells are listed in the header.
inline std::string table_to_csv(const TableResult& result, HeaderBlock header) {
  for (const auto& c : result.cells) {
    if (!c.ok) header.emplace_back("failed_cell", c.problem + "/" + to_string(c.method) + "/" + std::to_string(c.seed) +
                                                      ": " + c.error);
  }
  std::ostringstream os;
  write_header(os, header);
  os << "problem,method,mean_dhv,std_dhv,n_seeds\n";
  for (const auto& r : result.rows) {
    os << r.problem << ',' << to_string(r.method) << ',';
    if (r.summary.count == 0) {
      os << "nan,nan,0\n";
    } else {
      os << format_double(r.summary.mean) << ',' << format_double(r.summary.stddev) << ',' << r.summary.count << '\n';
    }
  }
  return os.str();
}

/// Per-run CSV: problem, method, seed, dhv, dropped.
inline std::string runs_to_csv(const std::vector<CellRecord>& cells, const HeaderBlock& header) {
  std::ostringstream os;
  write_header(os, header);
  os << "problem,method,seed,dhv,dropped\n";
  for (const auto& c : cells) {
    if (!c.ok) continue;
    os << c.problem << ',' << to_string(c.method) << ',' << c.seed << ',' << format_double(c.dhv) << ',' << c.dropped
       << '\n';
  }
  return os.str();
}

}  // namespace stch

#endif  // STCH_EXPERIMENTS_TABLE_HPP
