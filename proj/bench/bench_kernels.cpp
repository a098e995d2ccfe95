// Serial reference versus OpenMP kernels: operator assembly, matrix-free
// application and Monte Carlo estimation of rho. Reports the best of
// `reps` wall times and the largest difference between the two outputs.
//
//   bench_kernels [nodes] [paths] [reps]

#include "hierpareto/grid.hpp"
#include "hierpareto/operator.hpp"
#include "hierpareto/stochastic.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

using namespace hierpareto;

namespace {

template <class F>
double best_of(int reps, F&& f) {
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void report(const char* what, double serial, double parallel, double diff) {
  std::printf("%-22s serial %9.4f s  parallel %9.4f s  speedup %5.2f  max |diff| %.2e\n", what, serial, parallel,
              serial / parallel, diff);
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t nodes = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 801;
  const std::size_t paths = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 200000;
  const int reps = argc > 3 ? std::atoi(argv[3]) : 3;

  ModelConfig mc;
  mc.demand = Demand::sigmoidal(20.0);
  mc.kernel = Kernel::exponential(4.0);
  const Model model(mc);
  const BalanceOperator op(model);
  const Grid grid = build_grid(nodes, 1e-4, 2.0);
  std::printf("threads %d, nodes %zu, paths %zu, best of %d\n", omp_get_max_threads(), nodes, paths, reps);

  Eigen::MatrixXd a_s, a_p;
  const double ts = best_of(reps, [&] { a_s = assemble_serial(op, grid); });
  const double tp = best_of(reps, [&] { a_p = assemble_parallel(op, grid); });
  report("assemble", ts, tp, (a_s - a_p).cwiseAbs().maxCoeff());

  std::vector<double> rho(grid.size());
  for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = 0.5 + 0.5 * grid.nodes[i];
  std::vector<double> y_s, y_p;
  const double ms = best_of(reps, [&] { y_s = apply_A(op, grid, rho); });
  const double mp = best_of(reps, [&] { y_p = apply_A_parallel(op, grid, rho); });
  double d = 0.0;
  for (std::size_t i = 0; i < y_s.size(); ++i) d = std::max(d, std::abs(y_s[i] - y_p[i]));
  report("apply_A", ms, mp, d);

  const MarkovChain chain(model);
  MCEstimate e_s, e_p;
  const double cs = best_of(reps, [&] { e_s = estimate_rho_mc(chain, 0.3, paths, {7, 1}, 1e-6, false); });
  const double cp = best_of(reps, [&] { e_p = estimate_rho_mc(chain, 0.3, paths, {7, 1}, 1e-6, true); });
  report("estimate_rho_mc", cs, cp, std::abs(e_s.mean - e_p.mean));
  return 0;
}
