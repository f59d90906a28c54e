// Times the dense OpenMP gather kernel against the sparse serial reference
// on identical walks and cross-checks that they produced the same state.
// Usage: bench_step [t_max]   (default 150)

#include <omp.h>

#include <cstdio>
#include <cstdlib>

#include "qwalk/reduction.hpp"
#include "qwalk/walk.hpp"

using namespace qwalk;

namespace {

struct BenchCase {
  const char* name;
  WalkSpec spec;
};

void run_case(const BenchCase& bc, long t_max) {
  const double t0 = omp_get_wtime();
  StateVector sparse = bc.spec.initial;
  while (sparse.time < t_max) sparse = step_reference(bc.spec, sparse);
  const double serial = omp_get_wtime() - t0;

  const double t1 = omp_get_wtime();
  DenseWalker walker(bc.spec, t_max);
  walker.run_to(t_max);
  const double dense = omp_get_wtime() - t1;

  const double dev = max_site_deviation(sparse, walker.snapshot(1e-14));
  std::printf("%-28s t=%-4ld serial %8.3f s   dense %8.3f s   speedup %6.2fx"
              "   max deviation %.3e\n",
              bc.name, t_max, serial, dense, serial / dense, dev);
  if (dev > 1e-10) {
    std::fprintf(stderr, "engines disagree on %s\n", bc.name);
    std::exit(1);
  }
}

}  // namespace

int main(int argc, char** argv) {
  const long t_max = argc > 1 ? std::atol(argv[1]) : 150;
  std::printf("threads: %d\n", omp_get_max_threads());

  const CoinParams coin = CoinParams::hadamard();

  Eigen::VectorXcd psi2(2);
  psi2 << 1.0, 0.0;
  Eigen::VectorXcd psi4(4);
  psi4 << 0.5, 0.5, 0.5, 0.5;
  Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(16);
  e1[1] = 1.0;

  const std::vector<BenchCase> cases{
      {"plane",
       build_walk(Model::Plane, 1, coin, ReducedCoinParams::defaults(1),
                  Mode::Unitarized, Boundary::Slide, psi4)},
      {"joined k=2 unitarized",
       build_walk(Model::Joined, 2, coin, ReducedCoinParams::defaults(2),
                  Mode::Unitarized, Boundary::Slide, psi2)},
      {"channel walk (16-dim)",
       build_walk(Model::ReducedStar, 2, coin, ReducedCoinParams::defaults(2),
                  Mode::Literal, Boundary::Slide, e1)},
  };
  for (const BenchCase& bc : cases) run_case(bc, t_max);
  return 0;
}
