#pragma once

#include "hierpareto/grid.hpp"
#include "hierpareto/model.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace hierpareto {

// Right-hand side of the fixed-point equation for rho,
//
//   (A rho)(x) = 1/(x (1-x) C(x)) int_x^1 (z/x)^alpha ((1-z)/(1-x))^d R(z/x) rho(z) dz,
//
// with (A rho)(1) = R(1) rho(1) / ((d+1) C(1)). rho is piecewise linear on a
// grid, so A becomes an upper-triangular matrix on node values.
class BalanceOperator {
 public:
  BalanceOperator(Model model, double alpha, double d, int order = 12);
  // alpha and d from compute_exponents.
  explicit BalanceOperator(Model model);

  const Model& model() const noexcept { return model_; }
  double alpha() const noexcept { return alpha_; }
  double d() const noexcept { return d_; }

  // Weight of rho(1) in the row for x = 1.
  double boundary_weight() const noexcept { return boundary_weight_; }

  // Integral kernel K(x, z) for 0 < x < z < 1 (zero for z <= x).
  double kernel(double x, double z) const;

  // Row i of the collocation matrix; out has grid.size() entries.
  void row(const Grid& grid, std::size_t i, std::span<double> out) const;

 private:
  Model model_;
  double alpha_;
  double d_;
  double boundary_weight_;
  std::vector<double> gl_nodes_, gl_weights_;
  std::vector<double> gj_nodes_, gj_weights_;
};

Eigen::MatrixXd assemble_serial(const BalanceOperator& op, const Grid& grid);
Eigen::MatrixXd assemble_parallel(const BalanceOperator& op, const Grid& grid);

// Matrix-free application on node values; rho must be nonnegative.
std::vector<double> apply_A(const BalanceOperator& op, const Grid& grid, std::span<const double> rho);
std::vector<double> apply_A_parallel(const BalanceOperator& op, const Grid& grid,
                                     std::span<const double> rho);

}  // namespace hierpareto
