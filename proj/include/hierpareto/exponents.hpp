#pragma once

#include "hierpareto/model.hpp"

namespace hierpareto {

// Predicted exponents of the stationary income density.
//
// The density is reconstructed as n(1/x) = x^{2+alpha} (1-x)^d rho(x) / sigma(1/x),
// so `b` below is the decay exponent of n(s) itself: 3 for linear demand
// (sigma(s) = s contributes one power), 2 for slowly varying demand (up to a
// slowly varying factor) and 2 + alpha for sigmoidal demand.
struct ExponentReport {
  double b = 0.0;
  double d = 0.0;
  double alpha = 0.0;    // weight exponent in the balance operator
  double a_net = 0.0;    // cumulative net-income Pareto exponent, b - 1
  double a_gross = 0.0;  // cumulative gross-income Pareto exponent
  double minimal_income_residual = 0.0;
};

// d = R(1)/C(1) - 1, the boundary exponent at the minimal income.
double compute_d(const Model& model);

// Root alpha of m_alpha = C(0)/R0: 0 for linear and slowly varying demand,
// the unique positive root of m_alpha = 1 + 1/(S0 R0) for sigmoidal demand.
double compute_alpha(const Model& model);

// Tail exponent of n(s); see ExponentReport.
double compute_b(const Model& model);

// First-order solution alpha ~ delta / int r(s) ln s ds of m_alpha = 1 + delta.
double approx_alpha(const Kernel& kernel, double delta);

// Cumulative Pareto exponent of gross income g = s (1 + sigma(s) R0).
double gross_exponent(const Model& model);

ExponentReport compute_exponents(const Model& model);

}  // namespace hierpareto
