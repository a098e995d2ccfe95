#include "doctest.h"

#include "hierpareto/errors.hpp"
#include "hierpareto/exponents.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <vector>

using namespace hierpareto;

namespace {

Model make(Demand d, double lam) {
  ModelConfig mc;
  mc.demand = d;
  mc.kernel = Kernel::exponential(lam);
  return Model(mc);
}

// Independent root of lam e^lam lam^{-a-1} Gamma(a+1, lam) = target by bisection.
double alpha_oracle(double lam, double target) {
  auto m = [&](double a) { return lam * std::exp(lam) * std::pow(lam, -a - 1.0) * boost::math::tgamma(a + 1.0, lam); };
  double lo = 0.0, hi = 5.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (m(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("boundary exponent d") {
  CHECK(compute_d(make(Demand::linear(), 3.0)) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(compute_d(make(Demand::linear(), 4.0)) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(compute_d(make(Demand::linear(), 2.0)) == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
  CHECK(compute_d(make(Demand::slowly_varying(), 4.0)) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(compute_d(make(Demand::sigmoidal(20.0), 3.9)) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(compute_d(make(Demand::sigmoidal(20.0), 4.0)) == doctest::Approx(1.0 / 39.0).epsilon(1e-13));
  CHECK(compute_d(make(Demand::sigmoidal(20.0), 2.0)) == doctest::Approx(-19.0 / 39.0).epsilon(1e-13));
  CHECK(compute_d(make(Demand::linear(), 1.5)) == doctest::Approx(-0.5).epsilon(1e-14));
}

TEST_CASE("d stays above -1") {
  for (double lam = 0.1; lam < 20.0; lam *= 1.4) {
    for (const Demand& dem : {Demand::linear(), Demand::slowly_varying(), Demand::sigmoidal(20.0)})
      CHECK(compute_d(make(dem, lam)) > -1.0);
  }
}

TEST_CASE("alpha vanishes without saturation") {
  CHECK(compute_alpha(make(Demand::linear(), 3.0)) == 0.0);
  CHECK(compute_alpha(make(Demand::slowly_varying(), 3.0)) == 0.0);
  CHECK(compute_b(make(Demand::linear(), 3.0)) == 3.0);
  CHECK(compute_b(make(Demand::slowly_varying(), 3.0)) == 2.0);
}

TEST_CASE("sigmoidal exponent matches the incomplete-gamma oracle") {
  for (double lam : {2.0, 3.9, 4.0}) {
    const Model m = make(Demand::sigmoidal(20.0), lam);
    CHECK(compute_alpha(m) == doctest::Approx(alpha_oracle(lam, 1.05)).epsilon(1e-10));
  }
}

TEST_CASE("sigmoidal b frozen values") {
  CHECK(compute_b(make(Demand::sigmoidal(20.0), 3.9)) == doctest::Approx(2.22741533789752).epsilon(1e-11));
  CHECK(compute_b(make(Demand::sigmoidal(20.0), 4.0)) == doctest::Approx(2.23231017901131).epsilon(1e-11));
  CHECK(compute_b(make(Demand::sigmoidal(20.0), 2.0)) == doctest::Approx(2.13303930412692).epsilon(1e-11));
}

TEST_CASE("alpha solves its defining equation") {
  for (double s0 : {2.0, 20.0, 400.0}) {
    const Model m = make(Demand::sigmoidal(s0), 3.0);
    const double a = compute_alpha(m);
    CHECK(*m.kernel().moment(a) == doctest::Approx(m.C0() / m.R0()).epsilon(1e-11));
  }
}

TEST_CASE("alpha decreases as saturation rises") {
  double prev = 1e9;
  for (double s0 : {5.0, 10.0, 25.0, 50.0, 100.0, 1000.0}) {
    const double a = compute_alpha(make(Demand::sigmoidal(s0), 3.9));
    CHECK(a > 0.0);
    CHECK(a < prev);
    prev = a;
  }
}

TEST_CASE("first-order approximation of alpha") {
  const Kernel k = Kernel::exponential(3.9);
  struct Row { double s0, root, approx; };
  const std::vector<Row> rows{{25.0, 0.18343751858523, 0.189746634921452},
                              {50.0, 0.0932663892620515, 0.0948733174607258},
                              {100.0, 0.0470311118094203, 0.0474366587303629}};
  double prev_rel = 1.0;
  for (const Row& r : rows) {
    const double a = compute_alpha(make(Demand::sigmoidal(r.s0), 3.9));
    const double ap = approx_alpha(k, 1.0 / r.s0);
    CHECK(a == doctest::Approx(r.root).epsilon(1e-10));
    CHECK(ap == doctest::Approx(r.approx).epsilon(1e-10));
    const double rel = std::abs(ap - a) / a;
    CHECK(rel < prev_rel);  // error shrinks with delta
    prev_rel = rel;
  }
  CHECK(approx_alpha(k, 0.0) == 0.0);
}

TEST_CASE("exponent report") {
  const ExponentReport lin = compute_exponents(make(Demand::linear(), 3.0));
  CHECK(lin.b == 3.0);
  CHECK(lin.a_net == 2.0);
  CHECK(lin.a_gross == 1.0);
  CHECK(lin.minimal_income_residual == doctest::Approx(0.0));
  const ExponentReport sig = compute_exponents(make(Demand::sigmoidal(20.0), 3.9));
  CHECK(sig.a_net == doctest::Approx(1.22741533789752).epsilon(1e-11));
  CHECK(sig.a_gross == doctest::Approx(sig.a_net).epsilon(1e-14));
  CHECK(gross_exponent(make(Demand::slowly_varying(), 3.0)) == 1.0);
}

TEST_CASE("power-law kernel: root lies below the divergence threshold") {
  std::vector<double> s, v;
  for (double x = 1.0; x <= 20.0 + 1e-9; x *= 1.1) {
    s.push_back(x);
    v.push_back(1.5 * std::pow(x, -2.5));
  }
  ModelConfig mc;
  mc.demand = Demand::sigmoidal(3.0);
  mc.kernel = Kernel::tabulated(s, v, TailRule::power);
  mc.welfare = Welfare::rational(1.0 + mc.kernel.R0());
  const Model m(mc);
  const double a = compute_alpha(m);
  CHECK(a > 0.0);
  CHECK(a < 0.5);
  // m_a = 1.5 / (1.5 - a) for r = 1.5 s^-2.5.
  CHECK(1.5 / (1.5 - a) == doctest::Approx(m.C0() / m.R0()).epsilon(1e-9));
}
