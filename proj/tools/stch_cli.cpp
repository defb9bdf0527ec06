// stch: experiment runner for smooth Tchebycheff scalarization.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "stch/experiments/psl_experiment.hpp"
#include "stch/experiments/race.hpp"
#include "stch/experiments/table.hpp"
#include "stch/psl/checkpoint.hpp"
#include "stch/stch.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace stch;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  [[nodiscard]] double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

json to_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json header_json(const HeaderBlock& h) {
  json j = json::object();
  for (const auto& [k, v] : h) j[k] = v;
  return j;
}

void write_json(const fs::path& path, const json& j) { write_file_atomically(path, j.dump(2) + "\n"); }

Vector parse_list(const std::string& text, const char* what) {
  try {
    return parse_vector(text, ',');
  } catch (const IoError&) {
    throw ConfigError(std::string("cannot parse ") + what + ": '" + text + "'");
  }
}

std::vector<std::string> split_ids(const std::string& text) {
  std::vector<std::string> out;
  for (auto& s : split(text, ',')) {
    if (!s.empty()) out.push_back(s);
  }
  return out;
}

/// Turns a JSON config value into the text form the matching flag accepts.
std::string json_to_arg(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string out;
    for (const auto& e : v) out += (out.empty() ? "" : ",") + json_to_arg(e);
    return out;
  }
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

/**
 * Appends "--key=value" for every key of the JSON config whose flag exists on
 * the selected subcommand and was not given on the command line, so flags
 * override the file and the file overrides defaults.
 */
std::vector<std::string> config_args(const CLI::App& app, const CLI::App& sub, const json& cfg) {
  std::vector<std::string> extra;
  for (const auto& [key, value] : cfg.items()) {
    const std::string flag = "--" + key;
    const CLI::Option* opt = nullptr;
    for (const CLI::App* scope : {&sub, &app}) {
      for (const auto* o : scope->get_options()) {
        for (const auto& name : o->get_lnames()) {
          if (name == key && opt == nullptr) opt = o;
        }
      }
    }
    if (opt == nullptr || key == "config") throw ConfigError("unknown config key for '" + sub.get_name() + "': " + key);
    if (opt->count() == 0) extra.push_back(flag + "=" + json_to_arg(value));
  }
  return extra;
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  try {
    json j = json::parse(in);
    if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON config: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Options

struct Common {
  std::string out = "out";
  std::string front_dir;
  std::string config;

  [[nodiscard]] fs::path fronts() const { return front_dir.empty() ? fs::path(out) / "fronts" : fs::path(front_dir); }
};

struct SolveOpts {
  std::string problem;
  std::string method = "stch";
  std::string lambda;
  double mu = kDefaultMu;
  int iters = 200;
  double step = 0.25;
  std::string schedule;
  std::uint64_t seed = 0;
  double tolerance = 1e-10;
  int record_every = 1;
  std::string x0;
  std::string z_star;
  int n = kSyntheticDefaultDimension;
  int resolution = kDefaultFrontResolution;
};

struct RaceOpts {
  RaceConfig race;
  std::string lambda = "0.5,0.5";
  std::string z_star = "-0.1,-0.1";
};

struct PslOpts {
  std::string problem;
  std::string method = "stch";
  int seeds = kFullSeeds;
  std::uint64_t base_seed = 0;
  std::string budget = "full";
  std::string optimizer = "adam";
  std::string save_models = "first";
  PslSettings settings;
};

struct TableOpts {
  std::string problems = "all";
  std::string methods = "ls,tch,stch,mgda";
  int seeds = kFullSeeds;
  std::uint64_t base_seed = 0;
  std::string budget = "full";
  std::string optimizer = "adam";
  int workers = 1;
  PslSettings settings;
};

struct FrontOpts {
  std::string problem;
  int resolution = kDefaultFrontResolution;
  int threads = 1;
};

void add_settings(CLI::App* sub, PslSettings& s, std::string& optimizer) {
  sub->add_option("--mu", s.mu, "STCH smoothing parameter");
  sub->add_option("--iters", s.iterations, "training iterations");
  sub->add_option("--prefs", s.prefs_per_iter, "preferences per iteration");
  sub->add_option("--lr", s.learning_rate, "learning rate");
  sub->add_option("--optimizer", optimizer, "adam or sgd");
  sub->add_option("--hidden", s.hidden, "hidden layer width");
  sub->add_option("--n", s.synthetic_dimension, "decision dimension of F1-F6");
  sub->add_option("--resolution", s.front_resolution, "reference front resolution");
}

// ---------------------------------------------------------------------------
// Commands. Each validates everything before touching the file system.

int cmd_solve(const Common& c, const SolveOpts& o) {
  if (o.problem.empty()) throw ConfigError("--problem is required");
  const ProblemPtr problem = make_problem(o.problem, o.n);
  const bool mgda = parse_method(o.method) == Method::MGDA;
  const auto kind = mgda ? ScalarizationKind::STCH : parse_scalarization_kind(o.method);
  Vector lambda = o.lambda.empty() ? Vector::Constant(problem->m(), 1.0 / problem->m()) : parse_list(o.lambda, "lambda");
  if (lambda.size() != problem->m()) throw ConfigError("lambda needs one entry per objective");
  if ((lambda.array() < 0.0).any() || std::abs(lambda.sum() - 1.0) > 1e-9) {
    throw ConfigError("lambda must be non-negative and sum to 1");
  }
  Vector z_star = o.z_star.empty() ? Vector::Constant(problem->m(), -kDefaultIdealOffset) : parse_list(o.z_star, "z-star");
  if (z_star.size() != problem->m()) throw ConfigError("z-star needs one entry per objective");

  SolveConfig sc;
  sc.max_iters = o.iters;
  sc.step_size = o.step;
  sc.schedule = o.schedule.empty() ? (kind == ScalarizationKind::TCH && !mgda ? StepSchedule::InvSqrtT
                                                                              : StepSchedule::Constant)
                                   : parse_step_schedule(o.schedule);
  sc.seed = o.seed;
  sc.tolerance = o.tolerance;
  sc.record_every = o.record_every;
  if (!o.x0.empty()) sc.x0 = parse_list(o.x0, "x0");
  sc.validate();
  if (sc.x0 && sc.x0->size() != problem->n()) throw ConfigError("x0 needs one entry per decision variable");
  if (o.resolution < 100) throw ConfigError("--resolution must be >= 100");

  Timer timer;
  const ReferenceFront front = load_or_build_front(*problem, o.resolution, c.fronts());
  const auto spec = ScalarizationSpec::make(kind, z_star, o.mu, front.normalization());

  HeaderBlock header{{"command", "solve"},
                     {"problem", problem->name()},
                     {"method", o.method},
                     {"lambda", join(lambda, ';')},
                     {"mu", format_double(o.mu)},
                     {"z_star", join(z_star, ';') + " (normalized)"},
                     {"iters", std::to_string(o.iters)},
                     {"step", format_double(o.step)},
                     {"schedule", to_string(sc.schedule)},
                     {"tolerance", format_double(o.tolerance)},
                     {"seed", std::to_string(o.seed)},
                     {"n", std::to_string(problem->n())},
                     {"version", kVersion}};
  const std::string stem = "solve_" + problem->name() + "_" + o.method;
  const fs::path out(c.out);

  Trajectory traj;
  try {
    traj = mgda ? solve_mgda(*problem, sc, front.normalization()) : solve_scalarized(*problem, spec, lambda, sc);
  } catch (const DivergenceError& e) {
    write_file_atomically(out / (stem + ".csv"), trajectory_to_csv(e.trajectory(), header));
    throw;
  }
  write_file_atomically(out / (stem + ".csv"), trajectory_to_csv(traj, header));

  const auto& last = traj.last();
  const ObjectiveVector f(last.f);
  json summary;
  summary["config"] = header_json(header);
  summary["x"] = to_json(last.x);
  summary["f"] = to_json(last.f);
  summary["value"] = last.value;
  summary["grad_norm"] = last.grad_norm;
  summary["iterations"] = last.iter;
  summary["evaluations"] = traj.evaluations;
  summary["gradient_evaluations"] = traj.gradient_evaluations;
  summary["converged"] = traj.converged();
  summary["balance_residual"] = balance_residual(f, lambda, spec);
  summary["min_norm_residual"] =
      min_norm_residual(normalized_jacobian(problem->jacobian_unchecked(last.x), spec));
  write_json(out / (stem + "_summary.json"), summary);

  std::cout << "solve " << problem->name() << " " << o.method << ": f = [" << join(last.f, ' ') << "], value "
            << last.value << ", " << traj.evaluations << " evaluations, balance residual "
            << summary["balance_residual"].get<double>() << ", wall time " << timer.seconds() << " s\n";
  return kExitOk;
}

int cmd_race(const Common& c, RaceOpts o) {
  o.race.lambda = parse_list(o.lambda, "lambda");
  o.race.z_star = parse_list(o.z_star, "z-star");
  o.race.validate();
  Timer timer;
  const RaceResult r = run_race(o.race);
  const auto header = o.race.header();
  const fs::path out(c.out);
  write_file_atomically(out / "race.csv", race_to_csv(r, header));

  auto reach = [](const std::optional<std::int64_t>& v) -> json { return v ? json(*v) : json(nullptr); };
  const auto stch_reach = RaceResult::first_reach(r.stch.mean, 1e-3);
  const auto tch_reach = RaceResult::first_reach(r.tch.mean, 1e-3);
  bool stch_below = true;
  for (std::size_t k = 49; k < r.points(); ++k) stch_below = stch_below && r.stch.mean[k] < r.tch.mean[k];
  json summary;
  summary["config"] = header_json(header);
  summary["x_star"] = r.x_star;
  summary["f_star"] = to_json(r.f_star);
  summary["evals_to_1e-3_stch"] = reach(stch_reach);
  summary["evals_to_1e-3_tch"] = reach(tch_reach);
  summary["stch_mean_below_tch_from_50_evals"] = stch_below;
  const std::size_t at = std::min<std::size_t>(200, r.points()) - 1;
  summary["mean_gap_at_200_stch"] = r.stch.mean[at];
  summary["mean_gap_at_200_tch"] = r.tch.mean[at];
  write_json(out / "race_summary.json", summary);

  std::cout << "race: " << o.race.trials << " trials, STCH reaches mean gap 1e-3 at "
            << (stch_reach ? std::to_string(*stch_reach) : "never") << " evaluations, TCH at "
            << (tch_reach ? std::to_string(*tch_reach) : "never") << "; wall time " << timer.seconds() << " s\n";
  return kExitOk;
}

int cmd_psl(const Common& c, PslOpts o) {
  if (o.problem.empty()) throw ConfigError("--problem is required");
  const ProblemPtr problem = make_problem(o.problem, o.settings.synthetic_dimension);
  const Method method = parse_method(o.method);
  o.settings.optimizer = parse_optimizer_kind(o.optimizer);
  if (o.save_models != "first" && o.save_models != "all" && o.save_models != "none") {
    throw ConfigError("--save-models must be first, all or none");
  }
  TableConfig budgeted;
  budgeted.settings = o.settings;
  budgeted.seeds = o.seeds;
  budgeted.apply_budget(parse_budget(o.budget));
  const PslSettings settings = budgeted.settings;
  const int seeds = budgeted.seeds;
  settings.validate();
  if (seeds < 1) throw ConfigError("--seeds must be >= 1");

  Timer timer;
  const ReferenceFront front = load_or_build_front(*problem, settings.front_resolution, c.fronts());
  HeaderBlock header{{"command", "psl"}, {"problem", problem->name()}, {"method", o.method}};
  for (auto& kv : settings.header()) header.push_back(kv);
  header.emplace_back("seeds", std::to_string(seeds));
  header.emplace_back("base_seed", std::to_string(o.base_seed));
  header.emplace_back("budget", o.budget);
  header.emplace_back("version", kVersion);

  const fs::path dir = fs::path(c.out) / ("psl_" + problem->name() + "_" + o.method);
  std::vector<CellRecord> records;
  std::vector<double> values;
  for (int k = 0; k < seeds; ++k) {
    const std::uint64_t seed = cell_seed(o.base_seed, k);
    const CellResult cell = run_cell(problem, front, method, settings, seed);
    HeaderBlock h = header;
    h.emplace_back("seed", std::to_string(seed));
    write_file_atomically(dir / ("front_s" + std::to_string(seed) + ".csv"), points_to_csv(cell.archive.objectives(), h));
    if (cell.training) {
      write_file_atomically(dir / ("loss_s" + std::to_string(seed) + ".csv"),
                            loss_history_to_csv(cell.training->loss_history, h));
      if (o.save_models == "all" || (o.save_models == "first" && k == 0)) {
        const auto cfg = psl_train_config(method, front, settings, seed);
        write_file_atomically(dir / ("model_s" + std::to_string(seed) + ".json"),
                              model_to_json(cell.training->model, checkpoint_header(problem->name(), cfg)));
      }
    }
    CellRecord r{problem->name(), method, seed, true, cell.dhv.delta, cell.dhv.dropped, {}};
    records.push_back(r);
    values.push_back(cell.dhv.delta);
    std::cerr << "  seed " << seed << ": dhv " << cell.dhv.delta << " (dropped " << cell.dhv.dropped << ")\n";
  }
  write_file_atomically(dir / "dhv.csv", runs_to_csv(records, header));
  const SeedSummary s = summarize_values(values);
  json summary;
  summary["config"] = header_json(header);
  summary["mean_dhv"] = s.mean;
  summary["std_dhv"] = s.stddev;
  summary["n_seeds"] = s.count;
  write_json(dir / "summary.json", summary);
  std::cout << "psl " << problem->name() << " " << o.method << ": mean dhv " << s.mean << " +- " << s.stddev << " over "
            << s.count << " seeds; wall time " << timer.seconds() << " s\n";
  return kExitOk;
}

int cmd_table(const Common& c, TableOpts o) {
  TableConfig cfg;
  if (o.problems == "all") {
    for (const auto& p : list_problems(o.settings.synthetic_dimension)) cfg.problems.push_back(p->name());
  } else {
    cfg.problems = split_ids(o.problems);
  }
  cfg.methods.clear();
  for (const auto& m : split_ids(o.methods)) cfg.methods.push_back(parse_method(m));
  o.settings.optimizer = parse_optimizer_kind(o.optimizer);
  cfg.settings = o.settings;
  cfg.seeds = o.seeds;
  cfg.base_seed = o.base_seed;
  cfg.workers = o.workers;
  cfg.apply_budget(parse_budget(o.budget));
  cfg.front_dir = c.fronts();
  cfg.cell_dir = fs::path(c.out) / "cells";
  cfg.validate();

  Timer timer;
  const TableResult result = run_table(cfg, [](const CellRecord& r, bool cached) {
    std::cerr << "  " << r.problem << " " << to_string(r.method) << " seed " << r.seed << ": "
              << (r.ok ? "dhv " + format_double(r.dhv) : "FAILED " + r.error) << (cached ? " (cached)" : "") << "\n";
  });
  HeaderBlock header = cfg.header();
  header.emplace_back("budget", o.budget);
  const fs::path out(c.out);
  write_file_atomically(out / "table.csv", table_to_csv(result, header));
  write_file_atomically(out / "table_runs.csv", runs_to_csv(result.cells, header));

  const auto wins = result.stch_wins();
  std::cout << "table: " << cfg.problems.size() << " problems, STCH best against TCH and LS on " << wins.size()
            << "; wall time " << timer.seconds() << " s\n";
  return kExitOk;
}

int cmd_front(const Common& c, const FrontOpts& o) {
  if (o.problem.empty()) throw ConfigError("--problem is required");
  const ProblemPtr problem = make_problem(o.problem);
  if (o.resolution < 100) throw ConfigError("--resolution must be >= 100");
  if (o.threads < 1) throw ConfigError("--threads must be >= 1");
  const auto path = front_cache_path(c.fronts(), problem->name(), o.resolution);
  const ReferenceFront front = load_or_build_front(*problem, o.resolution, c.fronts(), o.threads);
  std::cout << path.string() << ": " << front.points.size() << " points (" << to_string(front.source) << ")\n";
  return kExitOk;
}

int cmd_list() {
  std::cout << "id     label           n  m\n";
  for (const auto& p : list_problems()) {
    std::cout << p->name() << std::string(7 - std::min<std::size_t>(6, p->name().size()), ' ') << p->label()
              << std::string(16 - std::min<std::size_t>(15, p->label().size()), ' ') << p->n() << "  " << p->m() << "\n";
  }
  std::cout << "toy    Toy             1  2\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Smooth Tchebycheff scalarization experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  Common common;
  app.add_option("--out", common.out, "output directory");
  app.add_option("--front-dir", common.front_dir, "reference front cache (default <out>/fronts)");
  app.add_option("--config", common.config, "JSON config file; flags override it");
  app.fallthrough();

  SolveOpts solve;
  auto* s = app.add_subcommand("solve", "single-preference solve");
  s->add_option("--problem", solve.problem, "problem id");
  s->add_option("--method", solve.method, "ls, tch, stch or mgda");
  s->add_option("--lambda", solve.lambda, "preference, comma separated");
  s->add_option("--mu", solve.mu, "STCH smoothing parameter");
  s->add_option("--iters", solve.iters, "maximum iterations");
  s->add_option("--step", solve.step, "step size (eta_0 for inv_sqrt_t)");
  s->add_option("--schedule", solve.schedule, "constant or inv_sqrt_t (default: inv_sqrt_t for tch)");
  s->add_option("--seed", solve.seed, "seed for the starting point");
  s->add_option("--tolerance", solve.tolerance, "gradient-norm stop (ignored by tch)");
  s->add_option("--record-every", solve.record_every, "keep every k-th iterate");
  s->add_option("--x0", solve.x0, "starting point, comma separated");
  s->add_option("--z-star", solve.z_star, "ideal point on normalized objectives");
  s->add_option("--n", solve.n, "decision dimension of F1-F6");
  s->add_option("--resolution", solve.resolution, "reference front resolution (normalization bounds)");

  RaceOpts race;
  auto* r = app.add_subcommand("race", "TCH vs STCH convergence race on the toy problem");
  r->add_option("--trials", race.race.trials, "number of seeded trials");
  r->add_option("--iters", race.race.iterations, "iterations per trial");
  r->add_option("--mu", race.race.mu, "STCH smoothing parameter");
  r->add_option("--stch-step", race.race.stch_step, "constant STCH step");
  r->add_option("--tch-step", race.race.tch_step, "TCH step eta_0 (eta_t = eta_0 / sqrt t)");
  r->add_option("--lambda", race.lambda, "preference");
  r->add_option("--z-star", race.z_star, "ideal point");
  r->add_option("--seed", race.race.seed, "base seed");

  PslOpts psl;
  auto* p = app.add_subcommand("psl", "Pareto set learning with ΔHV evaluation");
  p->add_option("--problem", psl.problem, "problem id");
  p->add_option("--method", psl.method, "ls, tch, stch or mgda");
  p->add_option("--seeds", psl.seeds, "number of seeds");
  p->add_option("--base-seed", psl.base_seed, "first seed");
  p->add_option("--budget", psl.budget, "full or desk (iterations / 4, seeds / 3)");
  p->add_option("--save-models", psl.save_models, "first, all or none");
  add_settings(p, psl.settings, psl.optimizer);

  TableOpts table;
  auto* t = app.add_subcommand("table", "ΔHV table over problems and methods");
  t->add_option("--problems", table.problems, "comma separated ids or 'all'");
  t->add_option("--methods", table.methods, "comma separated methods");
  t->add_option("--seeds", table.seeds, "seeds per cell");
  t->add_option("--base-seed", table.base_seed, "first seed");
  t->add_option("--budget", table.budget, "full or desk (iterations / 4, seeds / 3)");
  t->add_option("--workers", table.workers, "parallel cells");
  add_settings(t, table.settings, table.optimizer);

  FrontOpts front;
  auto* f = app.add_subcommand("front", "build and cache a reference front");
  f->add_option("--problem", front.problem, "problem id");
  f->add_option("--resolution", front.resolution, "front resolution");
  f->add_option("--threads", front.threads, "sweep threads");

  auto* l = app.add_subcommand("list", "list benchmark problems");

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::reverse(args.begin(), args.end());  // CLI11 consumes vectors from the back
    app.parse(args);
    if (!common.config.empty()) {
      const json cfg = load_config(common.config);
      CLI::App* sub = app.get_subcommands().front();
      auto extra = config_args(app, *sub, cfg);
      if (!extra.empty()) {
        std::vector<std::string> merged(argv + 1, argv + argc);
        merged.insert(merged.end(), extra.begin(), extra.end());
        std::reverse(merged.begin(), merged.end());
        app.clear();
        app.parse(merged);
      }
    }
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (s->parsed()) return cmd_solve(common, solve);
    if (r->parsed()) return cmd_race(common, race);
    if (p->parsed()) return cmd_psl(common, psl);
    if (t->parsed()) return cmd_table(common, table);
    if (f->parsed()) return cmd_front(common, front);
    if (l->parsed()) return cmd_list();
  } catch (const DivergenceError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const TrainingDivergence& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const DomainError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ContractViolation& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
