#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "stch/metrics/archive.hpp"
#include "stch/metrics/dominance.hpp"
#include "stch/metrics/hypervolume.hpp"
#include "stch/problems/catalog.hpp"
#include "stch/problems/reference_front.hpp"

using namespace stch;

namespace {

Vector v2(double a, double b) { return (Vector(2) << a, b).finished(); }
Vector v3(double a, double b, double c) { return (Vector(3) << a, b, c).finished(); }

std::vector<Vector> random_points(std::mt19937_64& rng, int count, int m) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vector> pts;
  for (int k = 0; k < count; ++k) {
    Vector p(m);
    for (int i = 0; i < m; ++i) p[i] = u(rng);
    pts.push_back(p);
  }
  return pts;
}

/// Random mutually non-dominated set on a sphere-like surface.
std::vector<Vector> random_front(std::mt19937_64& rng, int count, int m) {
  std::normal_distribution<double> n01(0.0, 1.0);
  std::vector<Vector> pts;
  for (int k = 0; k < count; ++k) {
    Vector d(m);
    for (int i = 0; i < m; ++i) d[i] = std::abs(n01(rng)) + 1e-3;
    pts.push_back(Vector::Ones(m) - d / d.norm());
  }
  return nondominated_filter(pts);
}

}  // namespace

// ---------------------------------------------------------------------------
// dominance and filtering

TEST(Filter, Examples) {
  auto out = nondominated_filter(std::vector<Vector>{v2(1, 2), v2(2, 1), v2(2, 2)});
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0], v2(1, 2));
  EXPECT_EQ(out[1], v2(2, 1));

  out = nondominated_filter(std::vector<Vector>{v2(1, 1), v2(1, 1)});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0], v2(1, 1));
}

TEST(Filter, MatchesBruteForce) {
  std::mt19937_64 rng(1);
  for (int m : {2, 3}) {
    for (int trial = 0; trial < 20; ++trial) {
      auto pts = random_points(rng, 200, m);
      // duplicates and ties on one coordinate
      pts.push_back(pts[3]);
      pts.push_back(pts[7]);
      Vector tie = pts[11];
      tie[0] = pts[12][0];
      pts.push_back(tie);
      const auto expected = oracle::brute_force_filter(pts);
      const auto got = nondominated_filter(pts);
      ASSERT_EQ(got.size(), expected.size());
      for (std::size_t i = 0; i < got.size(); ++i) ASSERT_EQ(got[i], expected[i]);
    }
  }
}

TEST(Filter, Idempotent) {
  std::mt19937_64 rng(2);
  const auto once = nondominated_filter(random_points(rng, 300, 3));
  const auto twice = nondominated_filter(once);
  ASSERT_EQ(once.size(), twice.size());
  for (std::size_t i = 0; i < once.size(); ++i) EXPECT_EQ(once[i], twice[i]);
}

TEST(Dominance, Definitions) {
  EXPECT_TRUE(dominates(v2(1, 1), v2(1, 2)));
  EXPECT_FALSE(dominates(v2(1, 1), v2(1, 1)));
  EXPECT_FALSE(dominates(v2(0, 2), v2(1, 1)));
  EXPECT_TRUE(strictly_dominates(v2(0, 0), v2(1, 1)));
  EXPECT_FALSE(strictly_dominates(v2(1, 0), v2(1, 1)));
}

// ---------------------------------------------------------------------------
// exact hypervolume

TEST(Hypervolume2d, Examples) {
  EXPECT_EQ(hypervolume_2d({v2(0, 1), v2(1, 0)}, v2(2, 2)), 3.0);
  EXPECT_EQ(hypervolume_2d({v2(0, 0)}, v2(1, 1)), 1.0);
  EXPECT_EQ(hypervolume_2d({}, v2(1, 1)), 0.0);
}

TEST(Hypervolume2d, PointsOutsideReferenceAreExcluded) {
  const std::vector<Vector> pts{v2(0, 1), v2(1, 0), v2(3, -1), v2(2, 0)};
  EXPECT_EQ(hypervolume_2d(pts, v2(2, 2)), 3.0);
  EXPECT_EQ(count_outside_reference(pts, v2(2, 2)), 2u);
}

TEST(Hypervolume3d, Examples) {
  EXPECT_EQ(hypervolume_3d({v3(0, 0, 0)}, v3(1, 1, 1)), 1.0);
  EXPECT_EQ(hypervolume_3d({v3(0, 0, 1), v3(1, 1, 0)}, v3(2, 2, 2)), 5.0);
  EXPECT_EQ(hypervolume_3d({}, v3(1, 1, 1)), 0.0);
}

TEST(Hypervolume3d, ReducesTo2dForFlatSets) {
  std::mt19937_64 rng(8);
  const auto front = random_front(rng, 40, 2);
  std::vector<Vector> lifted;
  for (const auto& p : front) lifted.push_back(v3(p[0], p[1], 0.0));
  EXPECT_NEAR(hypervolume_3d(lifted, v3(1.1, 1.1, 1.0)), hypervolume_2d(front, v2(1.1, 1.1)), 1e-14);
}

TEST(MonteCarlo, Examples) {
  const auto whole = hypervolume_mc({v2(0, 0)}, v2(1, 1), 1000000, 1);
  EXPECT_NEAR(whole.estimate, 1.0, 3.0 * whole.stderr_ + 1e-15);
  EXPECT_EQ(hypervolume_mc({}, v2(1, 1), 10000, 1).estimate, 0.0);
  const auto three = hypervolume_mc({v2(0, 1), v2(1, 0)}, v2(2, 2), 1000000, 3);
  EXPECT_NEAR(three.estimate, 3.0, 3.0 * three.stderr_);
  EXPECT_THROW(hypervolume_mc({v2(0, 0)}, v2(1, 1), 100, 1), ContractViolation);
}

TEST(MonteCarlo, ExactAgreesWithIndependentSampler) {
  std::mt19937_64 rng(5);
  for (int m : {2, 3}) {
    for (int trial = 0; trial < 4; ++trial) {
      const auto front = random_front(rng, 15, m);
      const Vector ref = Vector::Constant(m, 1.1);
      Vector lo = front.front();
      for (const auto& p : front) lo = lo.cwiseMin(p);
      const long samples = 400000;
      const double mc = oracle::mc_hypervolume(front, ref, lo, samples, 100u + trial);
      const double box = (ref - lo).prod();
      const double frac = mc / box;
      const double se = box * std::sqrt(frac * (1 - frac) / samples);
      EXPECT_NEAR(hypervolume(front, ref), mc, 3.0 * se + 1e-12) << "m=" << m;
    }
  }
}

TEST(Properties, AddingANonDominatedPointNeverDecreasesHv) {
  std::mt19937_64 rng(6);
  for (int m : {2, 3}) {
    const Vector ref = Vector::Constant(m, 1.1);
    for (int trial = 0; trial < 50; ++trial) {
      auto pts = random_front(rng, 20, m);
      const double before = hypervolume(pts, ref);
      auto extra = random_front(rng, 1, m).front();
      pts.push_back(extra);
      EXPECT_GE(hypervolume(nondominated_filter(pts), ref), before);
    }
  }
}

TEST(Properties, StrictDominationGivesStrictlyLargerHv) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> shift(0.001, 0.05);
  for (int m : {2, 3}) {
    const Vector ref = Vector::Constant(m, 1.1);
    for (int trial = 0; trial < 50; ++trial) {
      const auto b = random_front(rng, 20, m);
      std::vector<Vector> a;
      for (const auto& p : b) a.push_back(p - Vector::Constant(m, shift(rng)));
      EXPECT_GT(hypervolume(a, ref), hypervolume(b, ref));
    }
  }
}

// ---------------------------------------------------------------------------
// archive and delta_hv

TEST(Archive, StaysNonDominated) {
  std::mt19937_64 rng(9);
  ParetoArchive archive(Vector::Constant(3, 1.1));
  for (const auto& p : random_points(rng, 300, 3)) {
    archive.insert(Vector::Zero(1), p);
    ASSERT_TRUE(is_mutually_nondominated(archive.objectives()));
  }
  EXPECT_THROW(archive.insert(Vector::Zero(1), v2(0, 0)), ContractViolation);
}

TEST(Archive, RejectsNonFinite) {
  ParetoArchive archive;
  EXPECT_THROW(archive.insert(Vector::Zero(1), v2(std::nan(""), 0)), ContractViolation);
}

TEST(DeltaHv, FrontAgainstItselfIsZero) {
  const auto front = reference_front(*make_problem("F1"), 200);
  ParetoArchive archive(front.reference_point);
  for (const auto& p : front.points) archive.insert(Vector::Zero(1), p);
  const auto d = delta_hv(archive, front);
  EXPECT_EQ(d.delta, 0.0);
  EXPECT_EQ(d.dropped, 0u);
}

TEST(DeltaHv, SubsetIsNonNegative) {
  const auto front = reference_front(*make_problem("F4"), 300);
  std::mt19937_64 rng(10);
  std::bernoulli_distribution keep(0.3);
  ParetoArchive archive(front.reference_point);
  std::vector<ArchiveEntry> batch;
  for (const auto& p : front.points) {
    if (keep(rng)) batch.push_back({Vector::Zero(1), p});
  }
  archive.insert_all(batch);
  EXPECT_GE(delta_hv(archive, front).delta, 0.0);
}

TEST(DeltaHv, CountsDroppedAndRejectsMismatchedReference) {
  const auto front = reference_front(*make_problem("F1"), 200);
  ParetoArchive archive(front.reference_point);
  archive.insert(Vector::Zero(1), v2(5.0, 0.0));
  archive.insert(Vector::Zero(1), v2(0.5, 0.5));
  const auto d = delta_hv(archive, front);
  EXPECT_EQ(d.dropped, 1u);
  EXPECT_GT(d.delta, 0.0);

  ParetoArchive other(Vector::Constant(2, 2.0));
  other.insert(Vector::Zero(1), v2(0.5, 0.5));
  EXPECT_THROW(delta_hv(other, front), ContractViolation);
}

TEST(DeltaHv, EmptyArchiveGivesFullFrontVolume) {
  const auto front = reference_front(*make_problem("F2"), 200);
  const auto d = delta_hv(ParetoArchive(front.reference_point), front);
  EXPECT_DOUBLE_EQ(d.delta, d.hv_front);
  EXPECT_GT(d.hv_front, 0.0);
}
