#include "doctest.h"

#include "hierpareto/density.hpp"
#include "hierpareto/errors.hpp"
#include "hierpareto/exponents.hpp"
#include "hierpareto/operator.hpp"
#include "hierpareto/solver.hpp"
#include "hierpareto/tails.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

using namespace hierpareto;

namespace {

Model make(Demand d, double lam, double x_star = 0.5) {
  ModelConfig mc;
  mc.demand = d;
  mc.kernel = Kernel::exponential(lam);
  mc.x_star = x_star;
  return Model(mc);
}

// Slope of ln f(s) against ln s on log-spaced points of [lo, hi].
template <class F>
double loglog_slope(F f, double lo, double hi, int pts = 41) {
  std::vector<double> lx, ly;
  for (int k = 0; k < pts; ++k) {
    const double s = lo * std::pow(hi / lo, k / double(pts - 1));
    lx.push_back(std::log(s));
    ly.push_back(std::log(f(s)));
  }
  return ols_slope(lx, ly).first;
}

}  // namespace

// ---- grid ----

TEST_CASE("grid shape") {
  const Grid g = build_grid(201, 1e-4, 2.0);
  REQUIRE(g.size() == 201);
  CHECK(g.nodes.front() == doctest::Approx(1e-4));
  CHECK(g.nodes.back() == 1.0);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g.nodes[i] > g.nodes[i - 1]);
  const double wsum = std::accumulate(g.weights.begin(), g.weights.end(), 0.0);
  CHECK(wsum == doctest::Approx(1.0 - 1e-4).epsilon(1e-13));
  CHECK(std::binary_search(g.nodes.begin(), g.nodes.end(), 0.5));
}

TEST_CASE("two-node grid") {
  const Grid g = build_grid(2, 1e-3, 2.0);
  REQUIRE(g.size() == 2);
  CHECK(g.nodes[0] == doctest::Approx(1e-3));
  CHECK(g.nodes[1] == 1.0);
  CHECK_THROWS_AS(build_grid(1, 1e-3, 2.0), DomainError);
  CHECK_THROWS_AS(build_grid(10, 0.0, 2.0), DomainError);
}

TEST_CASE("trapezoid weights integrate linear functions exactly") {
  const Grid g = build_grid(57, 1e-3, 3.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) sum += g.weights[i] * (2.0 * g.nodes[i] + 1.0);
  CHECK(sum == doctest::Approx((1.0 + 1.0) - (1e-6 + 1e-3)).epsilon(1e-13));
}

TEST_CASE("interpolation and restriction") {
  const Grid g = build_grid(41, 1e-2, 2.0);
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = 3.0 * g.nodes[i] - 1.0;
  CHECK(g.interpolate(v, 0.37) == doctest::Approx(0.11).epsilon(1e-13));
  CHECK(g.interpolate(v, 1e-5) == doctest::Approx(v.front()));
  const Grid r = g.restricted(0.3);
  CHECK(r.nodes.front() >= 0.3 - 1e-15);
  CHECK(r.nodes.back() == 1.0);
}

// ---- operator ----

TEST_CASE("operator rows: boundary row and zero input") {
  for (const Model& m : {make(Demand::linear(), 3.0), make(Demand::sigmoidal(20.0), 4.0), make(Demand::linear(), 1.5)}) {
    const BalanceOperator op(m);
    CHECK(op.boundary_weight() == doctest::Approx(1.0).epsilon(1e-13));
    const Grid g = build_grid(61, 1e-3, 2.0);
    const std::vector<double> zero(g.size(), 0.0);
    for (double v : apply_A(op, g, zero)) CHECK(v == 0.0);
    const Eigen::MatrixXd a = assemble_serial(op, g);
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < i; ++j) CHECK(a(i, j) == 0.0);  // upper triangular
    CHECK((a.array() >= 0.0).all());
  }
}

TEST_CASE("A applied to a constant tends to one at both ends") {
  for (const Model& m : {make(Demand::linear(), 3.0), make(Demand::slowly_varying(), 2.0), make(Demand::sigmoidal(20.0), 3.9)}) {
    const BalanceOperator op(m);
    const Grid g = build_grid(201, 1e-4, 2.0);
    const std::vector<double> one(g.size(), 1.0);
    const std::vector<double> a1 = apply_A(op, g, one);
    CHECK(a1.back() == doctest::Approx(1.0).epsilon(1e-12));
    // Z/((1-x)c) -> 1 like 1/(1 + 1/(sigma(1/x) R0)), logarithmically slowly for slowly varying demand.
    const double s = 1.0 / g.x_min();
    const double limit = m.demand().kind() == DemandClass::slowly_varying ? 1.0 / (1.0 + 1.0 / (m.sigma(s) * m.R0())) : 1.0;
    CHECK(a1.front() == doctest::Approx(limit).epsilon(1e-3));
  }
}

TEST_CASE("serial and parallel assembly agree") {
  const BalanceOperator op(make(Demand::sigmoidal(20.0), 2.0));
  const Grid g = build_grid(81, 1e-4, 2.0);
  const Eigen::MatrixXd s = assemble_serial(op, g);
  const Eigen::MatrixXd p = assemble_parallel(op, g);
  CHECK((s - p).cwiseAbs().maxCoeff() == 0.0);
  std::vector<double> rho(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) rho[i] = 1.0 + g.nodes[i] * g.nodes[i];
  const auto a = apply_A(op, g, rho);
  const auto b = apply_A_parallel(op, g, rho);
  const Eigen::VectorXd mv = s * Eigen::Map<const Eigen::VectorXd>(rho.data(), rho.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(a[i] == b[i]);
    CHECK(a[i] == doctest::Approx(mv[i]).epsilon(1e-12));
  }
  std::vector<double> neg = rho;
  neg[3] = -1.0;
  CHECK_THROWS_AS(apply_A(op, g, neg), DomainError);
}

TEST_CASE("operator kernel is supported above the diagonal") {
  const BalanceOperator op(make(Demand::linear(), 3.0));
  CHECK(op.kernel(0.5, 0.4) == 0.0);
  CHECK(op.kernel(0.2, 0.3) > 0.0);
}

// ---- solver ----

TEST_CASE("all reference configurations converge to a positive rho") {
  for (double lam : {2.0, 3.0, 4.0}) {
    for (const Demand& dem : {Demand::linear(), Demand::slowly_varying(), Demand::sigmoidal(20.0)}) {
      const Model m = make(dem, lam);
      const RhoSolution sol = solve_rho(m, build_grid(201, 1e-4, 2.0));
      CHECK(sol.converged);
      CHECK(sol.residual <= 1e-8);
      CHECK(sol.rho.back() == 1.0);
      CHECK(*std::min_element(sol.rho.begin(), sol.rho.end()) > 0.0);
      CHECK(sol.residual_history.size() == static_cast<std::size_t>(sol.iterations) + 1);
    }
  }
}

TEST_CASE("solution does not depend on the starting point") {
  const Model m = make(Demand::sigmoidal(20.0), 3.9);
  const Grid g = build_grid(121, 1e-4, 2.0);
  const RhoSolution base = solve_rho(m, g);
  for (int variant = 0; variant < 3; ++variant) {
    SolveOptions o;
    o.initial.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double x = g.nodes[i];
      o.initial[i] = variant == 0 ? 5.0 : variant == 1 ? 0.1 + x : 2.0 + std::sin(20.0 * x);
    }
    const RhoSolution s = solve_rho(m, g, o);
    REQUIRE(s.converged);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(s.rho[i] == doctest::Approx(base.rho[i]).epsilon(1e-6));
  }
}

TEST_CASE("restricted domain reproduces the full solution") {
  const Model m = make(Demand::linear(), 2.0);
  const Grid g = build_grid(161, 1e-4, 2.0);
  const RhoSolution full = solve_rho(m, g);
  const Grid r = g.restricted(0.3);
  const RhoSolution part = solve_rho(m, r);
  REQUIRE(part.converged);
  const std::size_t off = g.size() - r.size();
  for (std::size_t i = 0; i < r.size(); ++i) CHECK(part.rho[i] == doctest::Approx(full.rho[off + i]).epsilon(1e-7));
}

TEST_CASE("grid refinement converges") {
  const Model m = make(Demand::linear(), 3.0);
  const RhoSolution coarse = solve_rho(m, build_grid(101, 1e-4, 2.0));
  const RhoSolution mid = solve_rho(m, build_grid(201, 1e-4, 2.0));
  const RhoSolution fine = solve_rho(m, build_grid(801, 1e-4, 2.0));
  double e1 = 0.0, e2 = 0.0;
  for (double x : {1e-3, 0.01, 0.1, 0.3, 0.6, 0.9}) {
    const double f = fine.grid.interpolate(fine.rho, x);
    e1 = std::max(e1, std::abs(coarse.grid.interpolate(coarse.rho, x) - f));
    e2 = std::max(e2, std::abs(mid.grid.interpolate(mid.rho, x) - f));
  }
  CHECK(e2 < e1);
  CHECK(e2 < 5e-3);
}

TEST_CASE("max_iter is reported honestly") {
  SolveOptions o;
  o.max_iter = 3;
  const RhoSolution s = solve_rho(make(Demand::linear(), 3.0), build_grid(51, 1e-3, 2.0), o);
  CHECK_FALSE(s.converged);
  CHECK(s.iterations == 3);
  CHECK(s.residual > o.tol);
}

// ---- density ----

TEST_CASE("net density: normalization and tail slopes") {
  struct Case { Demand dem; double lam; double b; };
  const std::vector<Case> cases{{Demand::linear(), 3.0, 3.0},
                                {Demand::linear(), 4.0, 3.0},
                                {Demand::linear(), 2.0, 3.0},
                                {Demand::sigmoidal(20.0), 3.9, 2.22741533789752},
                                {Demand::sigmoidal(20.0), 4.0, 2.23231017901131},
                                {Demand::sigmoidal(20.0), 2.0, 2.13303930412692}};
  for (const Case& c : cases) {
    const Model m = make(c.dem, c.lam);
    const NetDensity nd(m, solve_rho(m, build_grid(201, 1e-4, 2.0)));
    CHECK(nd.ccdf(1.0) == doctest::Approx(1.0).epsilon(1e-9));
    const double slope = loglog_slope([&](double s) { return nd(s); }, 1e2, 1e4);
    CHECK(-slope == doctest::Approx(c.b).epsilon(0.05 / c.b));
    double prev = 1.0;
    for (double s = 1.0; s < 1e6; s *= 1.5) {
      const double p = nd.ccdf(s);
      CHECK(p <= prev + 1e-15);
      prev = p;
    }
  }
}

TEST_CASE("slowly varying demand: exponent 2 after the logarithmic correction") {
  // ln(n sigma) = c - b ln s - g ln ln s over [1e5, 1e9]; closer windows carry
  // visible higher-order logarithmic terms.
  for (double lam : {2.0, 3.0, 4.0}) {
    const Model m = make(Demand::slowly_varying(), lam, 0.125);
    const NetDensity nd(m, solve_rho(m, build_grid(1201, 1e-11, 2.0)));
    Eigen::MatrixXd X(41, 3);
    Eigen::VectorXd y(41);
    for (int k = 0; k < 41; ++k) {
      const double s = 1e5 * std::pow(1e4, k / 40.0);
      X(k, 0) = 1.0;
      X(k, 1) = std::log(s);
      X(k, 2) = std::log(std::log(s));
      y(k) = std::log(nd(s) * m.sigma(s));
    }
    const Eigen::VectorXd beta = X.colPivHouseholderQr().solve(y);
    CHECK(-beta(1) == doctest::Approx(2.0).epsilon(0.025));
    CHECK(beta(2) < 0.0);  // rho decays like a power of ln s
  }
}

TEST_CASE("density near the minimal income follows (s-1)^d") {
  for (double lam : {2.0, 4.0}) {
    const Model m = make(Demand::linear(), lam);
    const double d = compute_d(m);
    const NetDensity nd(m, solve_rho(m, build_grid(401, 1e-4, 2.0)));
    const double slope = loglog_slope([&](double t) { return nd(1.0 + t); }, 1e-4, 1e-3, 11);
    CHECK(slope == doctest::Approx(d).epsilon(0.02 / std::abs(d)));
  }
}

TEST_CASE("gross map round trip") {
  for (const Demand& dem : {Demand::linear(), Demand::slowly_varying(), Demand::sigmoidal(20.0)}) {
    const Model m = make(dem, 3.0);
    for (double s = 1.0; s < 1e8; s *= 3.7) CHECK(invert_gross(m, gross_map(m, s)) == doctest::Approx(s).epsilon(1e-10));
  }
  CHECK(gross_map(make(Demand::linear(), 3.0), 1.0) == 2.0);
  CHECK_THROWS_AS(invert_gross(make(Demand::linear(), 3.0), 1.5), DomainError);
}

TEST_CASE("gross density tail") {
  const Model lin = make(Demand::linear(), 3.0);
  const NetDensity nd(lin, solve_rho(lin, build_grid(201, 1e-4, 2.0)));
  const GrossDensity gd(nd);
  const double slope = loglog_slope([&](double g) { return gd.ccdf(g); }, 1e3, 1e7);
  CHECK(-slope == doctest::Approx(1.0).epsilon(0.05));
  // Same probability mass on either side of the map.
  for (double s : {1.5, 10.0, 300.0}) CHECK(gd.ccdf(gross_map(lin, s)) == doctest::Approx(nd.ccdf(s)).epsilon(1e-12));
  const DensityTable t = gross_table(nd, 1e6, 50);
  CHECK(t.at.size() == 50);
  CHECK(t.at.front() == doctest::Approx(2.0));
}

TEST_CASE("unconverged solutions are rejected") {
  SolveOptions o;
  o.max_iter = 2;
  const Model m = make(Demand::linear(), 3.0);
  CHECK_THROWS_AS(NetDensity(m, solve_rho(m, build_grid(51, 1e-3, 2.0), o)), ConvergenceError);
}
