#include "doctest.h"

#include "hierpareto/operator.hpp"
#include "hierpareto/solver.hpp"
#include "hierpareto/spectral.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>

using namespace hierpareto;

namespace {

Model make(Demand d, double lam) {
  ModelConfig mc;
  mc.demand = d;
  mc.kernel = Kernel::exponential(lam);
  return Model(mc);
}

}  // namespace

TEST_CASE("spectrum of the identity and of zero") {
  const SpectrumReport zero = spectrum(Eigen::MatrixXd::Identity(5, 5));
  CHECK(zero.n == 5);
  CHECK(std::abs(zero.min_modulus_eigenvalue) == 0.0);
  CHECK(zero.multiplicity_estimate == 5);
  const SpectrumReport one = spectrum(Eigen::MatrixXd::Zero(4, 4));
  for (auto mu : one.eigenvalues) CHECK(std::abs(mu - 1.0) < 1e-14);
  CHECK(real_eigenvalues_outside_unit_disk(one) == 0);
}

TEST_CASE("eigenvalues outside the unit disk are counted") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
  a(0, 0) = -1.5;  // 1 - lam = 2.5
  a(1, 1) = 0.5;
  a(2, 2) = 3.0;   // 1 - lam = -2
  CHECK(real_eigenvalues_outside_unit_disk(spectrum(a)) == 2);
}

TEST_CASE("collocation spectrum: simple zero, nothing real outside the unit disk") {
  for (const Model& m : {make(Demand::linear(), 3.0), make(Demand::linear(), 1.5), make(Demand::sigmoidal(20.0), 4.0)}) {
    for (std::size_t n : {8, 16, 100}) {
      const Eigen::MatrixXd a = discretize_A(m, n);
      CHECK((a.array() >= 0.0).all());
      const SpectrumReport rep = spectrum(a);
      CHECK(rep.eigenvalues.size() == n);
      CHECK(std::abs(rep.min_modulus_eigenvalue) < 1e-10);
      CHECK(rep.multiplicity_estimate == 1);
      CHECK(real_eigenvalues_outside_unit_disk(rep) == 0);
    }
  }
}

TEST_CASE("leading eigenvector is the fixed point") {
  const Model m = make(Demand::sigmoidal(20.0), 3.9);
  const Grid g = build_grid(101, 1e-4, 2.0);
  const Eigen::MatrixXd a = assemble_serial(BalanceOperator(m), g);
  std::vector<double> v = leading_eigenvector(a);
  const RhoSolution sol = solve_rho(m, g);
  REQUIRE(v.size() == g.size());
  const double scale = v.back();
  REQUIRE(scale > 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] / scale == doctest::Approx(sol.rho[i]).epsilon(1e-6));
}

TEST_CASE("trigonometric Galerkin matrix") {
  const Model m = make(Demand::linear(), 3.0);
  const Eigen::MatrixXd a = discretize_A_fourier(m, 21, 1500);
  CHECK(a.rows() == 21);
  CHECK(a.allFinite());
  const SpectrumReport rep = spectrum(a);
  CHECK(rep.eigenvalues.size() == 21);
  CHECK(real_eigenvalues_outside_unit_disk(rep) == 0);
  // A maps the constant function near 1 on most of (0, 1): large (0,0) entry.
  CHECK(a(0, 0) > 0.5);
}
