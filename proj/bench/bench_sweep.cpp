// Times the OpenMP sweep kernel against the serial reference and reports
// the speedup, plus the per-call cost of the equilibrium solver.

#include <chrono>
#include <cstdio>

#include "metapop/cartography.hpp"
#include "metapop/equilibria.hpp"
#include "metapop/util.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace metapop;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

template <typename F>
double time_call(F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  f();
  return seconds_since(t0);
}

}  // namespace

int main(int argc, char** argv) {
  int steps = argc > 1 ? std::atoi(argv[1]) : 80;

  SweepSpec spec;
  spec.plane = SweepPlane::PhysicalLambda;
  spec.x_axis = spec.y_axis = {0.0, 4.0, steps};
  spec.D = 1.0;
  spec.k1 = 1.0;
  spec.k2 = 0.4;
  spec.reaction = ReactionKind::cubic_allee();
  spec.overlays = {CertificateId::ThmMain};

  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  std::printf("lambda-plane sweep, %d x %d cells, %d threads\n", steps, steps,
              threads);

  RegionMap serial_map, parallel_map;
  double t_serial = time_call([&] { serial_map = run_sweep_serial(spec); });
  double t_parallel = time_call([&] { parallel_map = run_sweep(spec); });

  bool identical = region_map_csv(serial_map) == region_map_csv(parallel_map);
  std::printf("serial    %8.3f s\n", t_serial);
  std::printf("parallel  %8.3f s  (speedup %.2fx, outputs %s)\n", t_parallel,
              t_serial / t_parallel, identical ? "identical" : "DIFFER");

  // Single-solve cost for scale.
  NormalizedParams n(2.5, 1.5, 0.4);
  ReactionKind cubic = ReactionKind::cubic_allee();
  int reps = 200;
  double t_solver = time_call([&] {
    for (int i = 0; i < reps; ++i) find_equilibria(n, cubic);
  });
  std::printf("find_equilibria: %.3f ms per call\n", 1e3 * t_solver / reps);
  return identical ? 0 : 1;
}
