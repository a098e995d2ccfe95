#include "hierpareto/solver.hpp"

#include "hierpareto/errors.hpp"

#include <cmath>
#include <sstream>

namespace hierpareto {

RhoSolution solve_rho(const BalanceOperator& op, const Grid& grid, const SolveOptions& opts) {
  const std::size_t n = grid.size();
  if (!(opts.tol > 0.0)) throw DomainError("solve_rho: tol must be positive");
  if (opts.max_iter < 1) throw DomainError("solve_rho: max_iter must be positive");

  Eigen::VectorXd rho = Eigen::VectorXd::Ones(static_cast<long>(n));
  if (!opts.initial.empty()) {
    if (opts.initial.size() != n) throw DomainError("solve_rho: initial guess size does not match the grid");
    for (std::size_t i = 0; i < n; ++i) {
      if (!(opts.initial[i] > 0.0)) throw DomainError("solve_rho: initial guess must be positive");
      rho[static_cast<long>(i)] = opts.initial[i];
    }
  }
  rho /= rho[static_cast<long>(n) - 1];

  const Eigen::MatrixXd a = opts.parallel ? assemble_parallel(op, grid) : assemble_serial(op, grid);

  RhoSolution sol;
  sol.grid = grid;
  sol.alpha = op.alpha();
  sol.d = op.d();

  int growth = 0;
  double prev = std::numeric_limits<double>::infinity();
  for (int it = 0; it <= opts.max_iter; ++it) {
    Eigen::VectorXd next = a * rho;
    const double res = (next - rho).cwiseAbs().maxCoeff();
    sol.residual_history.push_back(res);
    if (!std::isfinite(res)) throw ConvergenceError("solve_rho: residual is not finite");
    if (res <= opts.tol || it == opts.max_iter) {
      sol.iterations = it;
      sol.residual = res;
      sol.converged = res <= opts.tol;
      break;
    }
    growth = res > prev ? growth + 1 : 0;
    if (growth >= 50) {
      std::ostringstream msg;
      msg << "solve_rho: residual grew for 50 consecutive sweeps (sweep " << it << ", residual " << res << ")";
      throw ConvergenceError(msg.str());
    }
    prev = res;
    const double top = next[static_cast<long>(n) - 1];
    if (!(top > 0.0)) throw ConvergenceError("solve_rho: rho(1) lost positivity");
    rho = next / top;
  }
  sol.rho.assign(rho.data(), rho.data() + n);
  return sol;
}

RhoSolution solve_rho(const Model& model, const Grid& grid, const SolveOptions& opts) {
  return solve_rho(BalanceOperator(model), grid, opts);
}

}  // namespace hierpareto
