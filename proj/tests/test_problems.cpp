#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "oracles.hpp"
#include "stch/metrics/dominance.hpp"
#include "stch/problems/catalog.hpp"
#include "stch/problems/reference_front.hpp"

using namespace stch;

namespace {

Vector filled(int n, double v) { return Vector::Constant(n, v); }

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("stch_problems_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// Interior point where the Jacobian is locally smooth: FD at h and h/10 agree.
Vector smooth_interior_point(const Problem& p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.02, 0.98);
  auto f = [&](const Vector& x) { return p.evaluate_unchecked(x); };
  for (;;) {
    Vector x(p.n());
    for (int i = 0; i < p.n(); ++i) x[i] = p.lower()[i] + u(rng) * (p.upper()[i] - p.lower()[i]);
    const Matrix a = oracle::fd_jacobian(f, x, 1e-4);
    const Matrix b = oracle::fd_jacobian(f, x, 1e-5);
    if (oracle::relative_error(a, b) < 1e-3) return x;
  }
}

}  // namespace

TEST(Catalog, ElevenProblems) {
  const auto all = list_problems();
  ASSERT_EQ(all.size(), 11u);
  const std::vector<std::string> names{"F1", "F2", "F3", "F4", "F5", "F6", "RE21", "RE24", "RE33", "RE36", "RE37"};
  for (std::size_t i = 0; i < all.size(); ++i) {
    EXPECT_EQ(all[i]->name(), names[i]);
    EXPECT_TRUE(all[i]->m() == 2 || all[i]->m() == 3);
    EXPECT_TRUE((all[i]->lower().array() < all[i]->upper().array()).all());
  }
  EXPECT_EQ(make_problem("RE33")->m(), 3);
  EXPECT_EQ(make_problem("diskbrake")->name(), "RE33");
  EXPECT_THROW(make_problem("F9"), ContractViolation);
  EXPECT_FALSE(is_known_problem("nope"));
}

TEST(Catalog, GearTrainIsInteger) {
  const auto p = make_problem("RE36");
  for (bool flag : p->integrality()) EXPECT_TRUE(flag);
  EXPECT_EQ(p->lower(), filled(4, 12.0));
  EXPECT_EQ(p->upper(), filled(4, 60.0));
  EXPECT_NO_THROW(p->evaluate(filled(4, 30.5)));  // continuous relaxation

  const GearTrainProblem strict(true);
  EXPECT_THROW(strict.evaluate(filled(4, 30.5)), DomainError);
  EXPECT_NO_THROW(strict.evaluate(filled(4, 30.0)));
  const Vector rounded = p->evaluate_rounded(filled(4, 30.4)).values();
  EXPECT_EQ(rounded, p->evaluate(filled(4, 30.0)).values());
}

TEST(Evaluate, F1AndF4HandValues) {
  const auto f1 = make_synthetic(1, 6);
  const auto f4 = make_synthetic(4, 6);
  const Vector x = filled(6, 0.25);
  const auto a = f1->evaluate(x);
  EXPECT_NEAR(a[0], 0.25, 1e-15);
  EXPECT_NEAR(a[1], 0.5, 1e-15);
  const auto b = f4->evaluate(x);
  EXPECT_NEAR(b[0], 0.25, 1e-15);
  EXPECT_NEAR(b[1], 0.9375, 1e-15);
}

TEST(Evaluate, BarTrussConstantsAndHandValue) {
  const auto p = make_problem("RE21");
  EXPECT_DOUBLE_EQ(p->lower()[0], 1.0);
  EXPECT_DOUBLE_EQ(p->lower()[1], std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(p->lower()[2], std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(p->lower()[3], 1.0);
  EXPECT_EQ(p->upper(), filled(4, 3.0));
  const auto f = p->evaluate(filled(4, 2.0));
  EXPECT_NEAR(f[0], 200.0 * (6.0 + 3.0 * std::sqrt(2.0)), 1e-9);
  EXPECT_NEAR(f[0], 2048.528137423857, 1e-9);
  EXPECT_NEAR(f[1], 0.02, 1e-15);
}

TEST(Evaluate, OutOfBoxAndWrongSize) {
  const auto p = make_problem("F1");
  Vector x = filled(p->n(), 0.5);
  x[0] = 1.5;
  EXPECT_THROW(p->evaluate(x), DomainError);
  EXPECT_THROW(p->evaluate(filled(3, 0.5)), ContractViolation);
  x[0] = std::nan("");
  EXPECT_THROW(p->evaluate(x), DomainError);
}

TEST(Evaluate, SyntheticObjectivesNonNegative) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 1; k <= 6; ++k) {
    const auto p = make_synthetic(k);
    for (int s = 0; s < 500; ++s) {
      Vector x(p->n());
      for (int i = 0; i < p->n(); ++i) x[i] = p->lower()[i] + u(rng) * (p->upper()[i] - p->lower()[i]);
      const auto f = p->evaluate(x);
      ASSERT_GE(f[0], 0.0);
      ASSERT_GE(f[1], 0.0);
    }
  }
}

TEST(Evaluate, ZeroPenaltyReproducesFront) {
  for (int k = 1; k <= 6; ++k) {
    const auto p = make_synthetic(k);
    for (double t : {0.0, 0.1, 0.37, 0.5, 0.81, 1.0}) {
      const auto f = p->evaluate(p->zero_penalty_decision(t));
      const Vector front = p->front_point(t);
      EXPECT_NEAR(f[0], front[0], 1e-12) << p->name() << " t=" << t;
      EXPECT_NEAR(f[1], front[1], 1e-12) << p->name() << " t=" << t;
    }
  }
}

TEST(Jacobian, F1PartialAtZeroPenalty) {
  const auto p = make_synthetic(1);
  const Matrix j = p->jacobian(p->zero_penalty_decision(0.3));
  EXPECT_NEAR(j(0, 0), 1.0, 1e-12);
}

TEST(Jacobian, MatchesFiniteDifferencesOnAllProblems) {
  std::mt19937_64 rng(17);
  for (const auto& p : list_problems()) {
    auto f = [&](const Vector& x) { return p->evaluate_unchecked(x); };
    for (int k = 0; k < 20; ++k) {
      const Vector x = smooth_interior_point(*p, rng);
      const Matrix fd = oracle::fd_jacobian(f, x, 1e-6);
      EXPECT_LE(oracle::relative_error(p->jacobian(x), fd), 1e-5) << p->name() << " point " << k;
    }
  }
}

TEST(Jacobian, HatchCoverFeasiblePointHasZeroPenaltyRow) {
  const HatchCoverProblem p;
  Vector x(2);
  x << 3.5, 40.0;
  for (double g : p.constraints(x)) ASSERT_GT(g, 0.0);
  EXPECT_EQ(p.evaluate(x)[1], 0.0);
  EXPECT_TRUE(p.jacobian(x).row(1).isZero(0.0));
}

TEST(Front, AnalyticEndpointsAndShape) {
  const auto f1 = reference_front(*make_problem("F1"), 1000);
  EXPECT_EQ(f1.source, FrontSource::Analytic);
  ASSERT_EQ(f1.points.size(), 1000u);
  bool has_01 = false;
  bool has_10 = false;
  for (const auto& p : f1.points) {
    has_01 = has_01 || (p[0] == 0.0 && p[1] == 1.0);
    has_10 = has_10 || (p[0] == 1.0 && p[1] == 0.0);
  }
  EXPECT_TRUE(has_01);
  EXPECT_TRUE(has_10);
  EXPECT_EQ(make_synthetic(4)->front_point(0.5), (Vector(2) << 0.5, 0.75).finished());
}

TEST(Front, AnalyticFrontsAreNonDominated) {
  for (int k = 1; k <= 6; ++k) {
    const auto front = reference_front(*make_synthetic(k), 1000);
    EXPECT_TRUE(is_mutually_nondominated(front.points)) << k;
    for (const auto& p : front.normalized_points()) ASSERT_TRUE((p.array() < front.reference_point.array()).all());
  }
}

TEST(Front, SweepIsNonDominatedAndDeterministic) {
  const auto p = make_problem("RE21");
  const auto a = dense_sweep_front(*p, 100, 1);
  const auto b = dense_sweep_front(*p, 100, 3);
  EXPECT_EQ(a.source, FrontSource::DenseSweep);
  EXPECT_GT(a.points.size(), 10u);
  EXPECT_EQ(oracle::brute_force_filter(a.points).size(), a.points.size());
  ASSERT_EQ(a.points.size(), b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) ASSERT_EQ(a.points[i], b.points[i]);
  // the reference point lives in the front's normalized coordinates
  for (const auto& q : a.normalized_points()) ASSERT_TRUE((q.array() < a.reference_point.array()).all());
}

TEST(Front, ThreeObjectiveSweepIsNonDominated) {
  const auto front = dense_sweep_front(*make_problem("RE37"), 100, 1);
  EXPECT_EQ(front.m(), 3);
  EXPECT_EQ(oracle::brute_force_filter(front.points).size(), front.points.size());
}

TEST(Front, ResolutionBelowMinimumRejected) {
  EXPECT_THROW(reference_front(*make_problem("F1"), 99), ContractViolation);
}

TEST(Front, CsvRoundTripAndCache) {
  const auto dir = temp_dir("cache");
  const auto p = make_problem("F2");
  const auto built = load_or_build_front(*p, 200, dir);
  const auto path = front_cache_path(dir, "F2", 200);
  ASSERT_TRUE(std::filesystem::exists(path));
  const auto loaded = front_from_csv(path);
  EXPECT_EQ(loaded.problem, "F2");
  EXPECT_EQ(loaded.source, FrontSource::Analytic);
  ASSERT_EQ(loaded.points.size(), built.points.size());
  for (std::size_t i = 0; i < built.points.size(); ++i) ASSERT_EQ(loaded.points[i], built.points[i]);
  EXPECT_EQ(loaded.reference_point, built.reference_point);
  const auto again = load_or_build_front(*p, 200, dir);
  EXPECT_EQ(front_to_csv(again), front_to_csv(built));
}
