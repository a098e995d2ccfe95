#pragma once

#include "hierpareto/model.hpp"
#include "hierpareto/solver.hpp"

#include <vector>

namespace hierpareto {

// Stationary net-income density rebuilt from a converged rho,
//   n(s) = n0 x^{2+alpha} (1-x)^d rho(x) / sigma(1/x),  x = 1/s,
// with n0 fixing int_1^inf n(s) ds = 1. rho is held at rho(x_min) below x_min.
class NetDensity {
 public:
  NetDensity(Model model, RhoSolution sol);

  double operator()(double s) const;
  // P(S >= s).
  double ccdf(double s) const;
  double normalization() const noexcept { return n0_; }
  const RhoSolution& solution() const noexcept { return sol_; }
  const Model& model() const noexcept { return model_; }

 private:
  double weight(double x) const;  // integrand in x: x^alpha (1-x)^d rho / sigma(1/x)
  double mass_below(double x) const;

  Model model_;
  RhoSolution sol_;
  std::vector<double> cum_;  // int_0^{x_j} weight
  double n0_ = 0.0;
};

// g = s (1 + sigma(s) R0).
double gross_map(const Model& model, double s);
// Inverse of gross_map on [g(1), inf).
double invert_gross(const Model& model, double g);

// Gross-income density N(g) = n(s(g)) / g'(s(g)) and its complementary CDF.
class GrossDensity {
 public:
  explicit GrossDensity(const NetDensity& net) : net_(net) {}
  double operator()(double g) const;
  double ccdf(double g) const;

 private:
  const NetDensity& net_;
};

struct DensityTable {
  std::vector<double> at;
  std::vector<double> density;
  std::vector<double> ccdf;
};

// Log-spaced tables from the minimal income up to `upper`.
DensityTable net_table(const NetDensity& net, double upper, std::size_t points);
DensityTable gross_table(const NetDensity& net, double upper, std::size_t points);

}  // namespace hierpareto
