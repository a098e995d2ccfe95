#pragma once

#include "hierpareto/grid.hpp"
#include "hierpareto/operator.hpp"

#include <vector>

namespace hierpareto {

struct SolveOptions {
  double tol = 1e-8;
  int max_iter = 20000;
  std::vector<double> initial;  // empty: rho = 1
  bool parallel = true;         // OpenMP matrix assembly
};

struct RhoSolution {
  Grid grid;
  std::vector<double> rho;  // rho.back() == 1
  int iterations = 0;
  double residual = 0.0;     // sup |A rho - rho| at the returned rho
  bool converged = false;
  std::vector<double> residual_history;
  double alpha = 0.0;
  double d = 0.0;
};

// Sweeps rho <- A rho / (A rho)(1) until the sup-norm residual is <= tol.
// Returns an unconverged solution after max_iter sweeps; throws
// ConvergenceError if the residual grows for 50 consecutive sweeps.
RhoSolution solve_rho(const BalanceOperator& op, const Grid& grid, const SolveOptions& opts = {});
RhoSolution solve_rho(const Model& model, const Grid& grid, const SolveOptions& opts = {});

}  // namespace hierpareto
