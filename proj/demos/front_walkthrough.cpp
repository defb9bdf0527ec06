// Walks through the library on F4, whose Pareto front is concave:
// solve a few single preferences, then train a small preference-conditioned
// model with each scalarization and compare the recovered fronts.
//
//   ./stch_demo [iterations]

#include <cstdio>
#include <cstdlib>

#include "stch/experiments/psl_experiment.hpp"
#include "stch/stch.hpp"

using namespace stch;

int main(int argc, char** argv) {
  const int iterations = argc > 1 ? std::atoi(argv[1]) : 500;
  const ProblemPtr f4 = make_problem("F4");
  const ReferenceFront front = reference_front(*f4, 1000);

  std::printf("%s: n=%d m=%d, reference point (%.3f, %.3f)\n\n", f4->name().c_str(), f4->n(), f4->m(),
              front.reference_point[0], front.reference_point[1]);

  std::printf("single-preference solves (normalized objectives, z* = -0.1)\n");
  std::printf("%8s %8s  %-18s %-18s\n", "lambda1", "kind", "f1", "f2");
  for (double l1 : {0.2, 0.5, 0.8}) {
    const Vector lambda = (Vector(2) << l1, 1.0 - l1).finished();
    for (auto kind : {ScalarizationKind::LS, ScalarizationKind::STCH}) {
      SolveConfig sc;
      sc.max_iters = 2000;
      sc.step_size = 0.05;
      sc.seed = 7;
      const auto spec = ScalarizationSpec::make(kind, Vector::Constant(2, -0.1), 0.01, front.normalization());
      const auto traj = solve_scalarized(*f4, spec, lambda, sc);
      std::printf("%8.2f %8s  %-18.6f %-18.6f\n", l1, to_string(kind).c_str(), traj.last().f[0], traj.last().f[1]);
    }
  }

  std::printf("\nPareto set learning, %d iterations x 10 preferences\n", iterations);
  PslSettings settings;
  settings.iterations = iterations;
  for (auto method : {Method::LS, Method::TCH, Method::STCH}) {
    const auto cell = run_cell(f4, front, method, settings, 1);
    int interior = 0;
    for (const auto& e : cell.solutions) interior += (e.f[0] > 0.05 && e.f[0] < 0.95) ? 1 : 0;
    std::printf("%6s  dHV = %.4e   interior solutions: %3d / %zu\n", to_string(method).c_str(), cell.dhv.delta,
                interior, cell.solutions.size());
  }
  return 0;
}
