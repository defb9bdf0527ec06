#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "stch/problems/catalog.hpp"
#include "stch/solvers/min_norm.hpp"
#include "stch/solvers/solve.hpp"

using namespace stch;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

const Vector kZ = Vector::Constant(2, -0.1);

ScalarizationSpec spec_of(ScalarizationKind kind, double mu = kDefaultMu) { return ScalarizationSpec::make(kind, kZ, mu); }

/// Grid minimizer of the Tchebycheff value on the toy problem's box.
double toy_oracle(const Vector& lambda) {
  double best = INFINITY;
  double arg = 0.0;
  for (long k = 0; k <= 3000000; ++k) {
    const double x = -1.0 + 1e-6 * static_cast<double>(k);
    const double v = std::max(lambda[0] * (x * x - kZ[0]), lambda[1] * ((x - 1) * (x - 1) - kZ[1]));
    if (v < best) {
      best = v;
      arg = x;
    }
  }
  return arg;
}

Vector toy_f(double x) { return vec({x * x, (x - 1) * (x - 1)}); }

}  // namespace

// ---------------------------------------------------------------------------
// min_norm_weights

TEST(MinNorm, Examples) {
  Matrix g(2, 2);
  g << 1, 0, 0, 1;
  EXPECT_EQ(min_norm_weights(g), vec({0.5, 0.5}));
  g << 1, 0, 2, 0;
  EXPECT_EQ(min_norm_weights(g), vec({1.0, 0.0}));
  g << 3, 1, 3, 1;
  EXPECT_EQ(min_norm_weights(g), vec({0.5, 0.5}));
}

TEST(MinNorm, MatchesGridOracleForThreeObjectives) {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> n01(0.0, 1.0);
  for (int k = 0; k < 10; ++k) {
    Matrix g(3, 2);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 2; ++j) g(i, j) = n01(rng);
    }
    const Vector a = min_norm_weights(g);
    EXPECT_NEAR(a.sum(), 1.0, 1e-12);
    EXPECT_TRUE((a.array() >= 0.0).all());
    EXPECT_NEAR((g.transpose() * a).squaredNorm(), oracle::min_norm_sq_grid3(g), 1e-6);
  }
}

TEST(MinNorm, RejectsSingleGradient) { EXPECT_THROW(min_norm_weights(Matrix::Ones(1, 3)), ContractViolation); }

// ---------------------------------------------------------------------------
// project_box

TEST(ProjectBox, Examples) {
  const Vector lo = Vector::Zero(3);
  const Vector hi = Vector::Ones(3);
  EXPECT_EQ(project_box(vec({-1, 0.5, 2}), lo, hi), vec({0, 0.5, 1}));
  EXPECT_EQ(project_box(vec({0.2, 0.3, 0.9}), lo, hi), vec({0.2, 0.3, 0.9}));
  const Vector once = project_box(vec({-3, 4, 0.5}), lo, hi);
  EXPECT_EQ(project_box(once, lo, hi), once);
}

// ---------------------------------------------------------------------------
// solve_scalarized on the toy problem

TEST(ToySolve, StchReachesBalancedOptimum) {
  ToyProblem toy;
  const Vector lambda = vec({0.5, 0.5});
  const double x_star = toy_oracle(lambda);
  EXPECT_NEAR(x_star, 0.5, 1e-6);
  for (double mu : {0.05, 0.1}) {
    SolveConfig sc;
    sc.max_iters = 200;
    sc.step_size = 0.25;
    sc.seed = 3;
    const auto spec = spec_of(ScalarizationKind::STCH, mu);
    const auto traj = solve_scalarized(toy, spec, lambda, sc);
    EXPECT_LE(balance_residual(ObjectiveVector(traj.last().f), lambda, spec), 1e-3) << "mu=" << mu;
    EXPECT_NEAR(traj.last().x[0], x_star, 1e-3);
  }
}

TEST(ToySolve, LargeStepWithSmallMuOscillates) {
  // Near the optimum the STCH curvature is about 1 + 0.25 / mu = 6 at mu = 0.05,
  // so a constant step of 0.5 overshoots (step * curvature > 2) and the iterates
  // settle into a two-cycle around x* instead of converging.
  ToyProblem toy;
  SolveConfig sc;
  sc.max_iters = 200;
  sc.step_size = 0.5;
  sc.seed = 3;
  const auto traj = solve_scalarized(toy, spec_of(ScalarizationKind::STCH, 0.05), vec({0.5, 0.5}), sc);
  const auto& it = traj.iterates;
  const double a = it[it.size() - 1].x[0];
  const double b = it[it.size() - 2].x[0];
  const double c = it[it.size() - 3].x[0];
  EXPECT_GT(std::abs(a - b), 1e-2);
  EXPECT_NEAR(a, c, 1e-9);
  EXPECT_NEAR(0.5 * (a + b), 0.5, 1e-6);
}

TEST(ToySolve, TchGapLargerAtEqualBudget) {
  ToyProblem toy;
  const Vector lambda = vec({0.5, 0.5});
  const Vector f_star = toy_f(toy_oracle(lambda));
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    SolveConfig sc;
    sc.max_iters = 199;  // 200 evaluations
    sc.seed = seed;
    sc.step_size = 0.25;
    const auto stch = solve_scalarized(toy, spec_of(ScalarizationKind::STCH), lambda, sc);
    sc.step_size = 0.5;
    sc.schedule = StepSchedule::InvSqrtT;
    const auto tch = solve_scalarized(toy, spec_of(ScalarizationKind::TCH), lambda, sc);
    ASSERT_EQ(stch.evaluations, 200);
    ASSERT_EQ(tch.evaluations, 200);
    EXPECT_GT((tch.last().f - f_star).norm(), (stch.last().f - f_star).norm()) << "seed " << seed;
  }
}

TEST(ToySolve, TchIgnoresTolerance) {
  ToyProblem toy;
  SolveConfig sc;
  sc.max_iters = 50;
  sc.tolerance = 1e3;
  const auto tch = solve_scalarized(toy, spec_of(ScalarizationKind::TCH), vec({0.5, 0.5}), sc);
  EXPECT_EQ(tch.last().iter, 50);
  const auto stch = solve_scalarized(toy, spec_of(ScalarizationKind::STCH), vec({0.5, 0.5}), sc);
  EXPECT_EQ(stch.last().iter, 0);
  EXPECT_TRUE(stch.converged());
}

TEST(ToySolve, DescentIsMonotoneWithSmallStep) {
  ToyProblem toy;
  const double mu = 0.1;
  const double l_est = 2.0 + 9.0 / mu;  // bound on the STCH curvature over [-1, 2]
  SolveConfig sc;
  sc.max_iters = 500;
  sc.step_size = 0.1 / l_est;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    sc.seed = seed;
    const auto traj = solve_scalarized(toy, spec_of(ScalarizationKind::STCH, mu), vec({0.3, 0.7}), sc);
    for (std::size_t i = 1; i < traj.iterates.size(); ++i) {
      ASSERT_LE(traj.iterates[i].value, traj.iterates[i - 1].value + 1e-12);
    }
  }
}

TEST(ToySolve, BalanceTightensAsMuShrinks) {
  ToyProblem toy;
  const Vector lambda = vec({0.3, 0.7});
  double previous = INFINITY;
  for (double mu : {0.1, 0.01}) {
    SolveConfig sc;
    sc.max_iters = 200000;
    sc.step_size = 0.5 * mu;
    sc.tolerance = 1e-12;
    sc.record_every = 1000;
    const auto spec = spec_of(ScalarizationKind::STCH, mu);
    const auto traj = solve_scalarized(toy, spec, lambda, sc);
    ASSERT_TRUE(traj.converged()) << "mu=" << mu;
    const double r = balance_residual(ObjectiveVector(traj.last().f), lambda, spec);
    EXPECT_LE(r, mu * std::log(2.0) * 2.0) << "mu=" << mu;
    EXPECT_LT(r, previous);
    previous = r;
  }
}

TEST(Trajectory, InvariantsAndCounters) {
  const auto f1 = make_problem("F1");
  SolveConfig sc;
  sc.max_iters = 57;
  sc.step_size = 0.05;
  sc.record_every = 10;
  sc.seed = 4;
  const auto traj = solve_scalarized(*f1, spec_of(ScalarizationKind::STCH), vec({0.4, 0.6}), sc);
  EXPECT_EQ(traj.evaluations, 58);
  EXPECT_EQ(traj.gradient_evaluations, 58);
  EXPECT_EQ(traj.iterates.front().iter, 0);
  EXPECT_EQ(traj.last().iter, 57);
  for (std::size_t i = 1; i < traj.iterates.size(); ++i) {
    EXPECT_GT(traj.iterates[i].iter, traj.iterates[i - 1].iter);
    EXPECT_GE(traj.iterates[i].evaluations, traj.iterates[i - 1].evaluations);
  }
  for (const auto& p : traj.iterates) EXPECT_TRUE(f1->contains(p.x));

  const auto mgda = solve_mgda(*f1, sc);
  EXPECT_GE(mgda.gradient_evaluations, traj.gradient_evaluations);
  EXPECT_EQ(mgda.gradient_evaluations, 2 * 58);
}

TEST(Trajectory, IteratesStayInBoxWithHugeSteps) {
  for (const auto& p : list_problems()) {
    SolveConfig sc;
    sc.max_iters = 20;
    sc.step_size = 1e3;
    sc.seed = 1;
    const auto spec = ScalarizationSpec::make(ScalarizationKind::LS, Vector::Zero(p->m()));
    const auto traj = solve_scalarized(*p, spec, Vector::Constant(p->m(), 1.0 / p->m()), sc);
    for (const auto& it : traj.iterates) ASSERT_TRUE(p->contains(it.x)) << p->name();
  }
}

TEST(Trajectory, Deterministic) {
  const auto p = make_problem("RE37");
  SolveConfig sc;
  sc.max_iters = 100;
  sc.step_size = 0.05;
  sc.seed = 9;
  const auto spec = ScalarizationSpec::make(ScalarizationKind::STCH, Vector::Constant(3, -0.1));
  const Vector lambda = vec({0.2, 0.3, 0.5});
  EXPECT_EQ(trajectory_to_csv(solve_scalarized(*p, spec, lambda, sc)),
            trajectory_to_csv(solve_scalarized(*p, spec, lambda, sc)));
  EXPECT_EQ(trajectory_to_csv(solve_mgda(*p, sc)), trajectory_to_csv(solve_mgda(*p, sc)));
}

TEST(Trajectory, ConfigValidation) {
  ToyProblem toy;
  SolveConfig sc;
  sc.max_iters = 0;
  EXPECT_THROW(solve_scalarized(toy, spec_of(ScalarizationKind::STCH), vec({0.5, 0.5}), sc), ContractViolation);
  sc.max_iters = 1;
  sc.step_size = -1;
  EXPECT_THROW(solve_mgda(toy, sc), ContractViolation);
  EXPECT_THROW(parse_step_schedule("cosine"), ContractViolation);
}

namespace {

class Explodes final : public Problem {
 public:
  Explodes() : Problem("explodes", "explodes", Vector::Constant(1, -1.0), Vector::Constant(1, 1.0), 2) {}
  [[nodiscard]] Vector evaluate_unchecked(const Vector& x) const override {
    return x[0] < 0.0 ? vec({INFINITY, 0.0}) : vec({x[0], 1.0 - x[0]});
  }
  [[nodiscard]] Matrix jacobian_unchecked(const Vector&) const override { return (Matrix(2, 1) << 1.0, -1.0).finished(); }
};

}  // namespace

TEST(Trajectory, DivergenceKeepsLastFiniteIterate) {
  Explodes p;
  SolveConfig sc;
  sc.x0 = vec({0.5});
  sc.step_size = 0.3;
  sc.max_iters = 10;
  try {
    (void)solve_scalarized(p, ScalarizationSpec::make(ScalarizationKind::LS, Vector::Zero(2)), vec({1.0, 0.0}), sc);
    FAIL() << "expected divergence";
  } catch (const DivergenceError& e) {
    ASSERT_FALSE(e.trajectory().iterates.empty());
    EXPECT_TRUE(e.trajectory().last().f.allFinite());
    EXPECT_GE(e.trajectory().last().x[0], 0.0);
  }
}

// ---------------------------------------------------------------------------
// concave fronts and MGDA

TEST(LinearScalarization, ConcaveFrontOnlyEndpoints) {
  const auto f4 = make_problem("F4");
  // interior weights: with lambda_i = 0 the other objective's coupling
  // variables receive no gradient and the solution is only weakly optimal
  for (int k = 0; k <= 10; ++k) {
    const double l1 = 0.05 + 0.09 * k;
    SolveConfig sc;
    sc.max_iters = 20000;
    sc.step_size = 0.02;
    sc.record_every = sc.max_iters;
    sc.seed = 100 + static_cast<std::uint64_t>(k);
    const auto spec = ScalarizationSpec::make(ScalarizationKind::LS, Vector::Zero(2));
    const auto traj = solve_scalarized(*f4, spec, vec({l1, 1.0 - l1}), sc);
    const Vector f = traj.last().f;
    const double to_left = (f - vec({0.0, 1.0})).norm();
    const double to_right = (f - vec({1.0, 0.0})).norm();
    EXPECT_LE(std::min(to_left, to_right), 1e-2) << "lambda1=" << l1 << " f=(" << f[0] << "," << f[1] << ")";
  }
}

TEST(Mgda, ToyConvergesIntoParetoSet) {
  ToyProblem toy;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SolveConfig sc;
    sc.max_iters = 2000;
    sc.step_size = 0.25;
    sc.tolerance = 1e-6;
    sc.seed = seed;
    const auto traj = solve_mgda(toy, sc);
    ASSERT_TRUE(traj.converged());
    EXPECT_GE(traj.last().x[0], -1e-6);
    EXPECT_LE(traj.last().x[0], 1.0 + 1e-6);
    EXPECT_LE(traj.last().grad_norm, 1e-6);
    EXPECT_LE(min_norm_residual(toy.jacobian(traj.last().x)), 1e-6);
  }
}

TEST(Stationarity, ConvergedStchSolvesAreParetoStationary) {
  for (const std::string id : {"toy", "F1", "F2", "F4", "F5"}) {
    const auto p = make_problem(id);
    SolveConfig sc;
    sc.max_iters = 50000;
    sc.step_size = 0.02;
    sc.tolerance = 1e-8;
    sc.record_every = 1000;
    sc.seed = 5;
    const auto traj = solve_scalarized(*p, spec_of(ScalarizationKind::STCH), vec({0.4, 0.6}), sc);
    ASSERT_TRUE(traj.converged()) << id << " final grad " << traj.last().grad_norm;
    EXPECT_LE(min_norm_residual(p->jacobian(traj.last().x)), 1e-6) << id;
  }
}
