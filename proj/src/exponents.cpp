#include "hierpareto/exponents.hpp"

#include "hierpareto/errors.hpp"

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstdint>

namespace hierpareto {

double compute_d(const Model& model) {
  const double c1 = model.C1();
  if (!(c1 > 0.0)) throw ConfigError("C(1) <= 0: no admissible boundary exponent");
  return model.R(1.0) / c1 - 1.0;
}

namespace {

double solve_moment_equation(const Kernel& kernel, double target) {
  if (target < 1.0) throw DomainError("moment equation needs a target >= 1 = m_0");
  if (target == 1.0) return 0.0;

  const double limit = kernel.moment_divergence_threshold();
  auto excess = [&](double a) {
    const auto m = kernel.moment(a);
    if (!m) throw DivergenceError("moment diverged inside the bracket");
    return *m - target;
  };

  // Geometric scan for an upper bracket below the divergence threshold.
  double hi = 0.25;
  double f_hi = 0.0;
  for (int k = 0;; ++k) {
    if (k > 200) throw DivergenceError("moment equation has no root below the divergence threshold");
    if (std::isfinite(limit) && hi >= limit) hi = limit * (1.0 - std::ldexp(1.0, -(k + 1)));
    f_hi = excess(hi);
    if (f_hi > 0.0) break;
    if (std::isfinite(limit) && limit - hi < 1e-12) throw DivergenceError("moment equation unsatisfiable before kernel moments diverge");
    hi *= 2.0;
  }
  const double lo = 0.0;
  std::uintmax_t iters = 200;
  boost::math::tools::eps_tolerance<double> tol(48);
  const auto [a, b] = boost::math::tools::toms748_solve(excess, lo, hi, 1.0 - target, f_hi, tol, iters);
  return 0.5 * (a + b);
}

}  // namespace

double compute_alpha(const Model& model) {
  if (model.demand().kind() != DemandClass::sigmoidal) return 0.0;
  return solve_moment_equation(model.kernel(), model.C0() / model.R0());
}

double compute_b(const Model& model) {
  switch (model.demand().kind()) {
    case DemandClass::linear: return 3.0;
    case DemandClass::slowly_varying: return 2.0;
    case DemandClass::sigmoidal: return 2.0 + compute_alpha(model);
  }
  return 0.0;
}

double approx_alpha(const Kernel& kernel, double delta) {
  if (!(delta >= 0.0)) throw DomainError("approx_alpha needs delta >= 0");
  if (delta == 0.0) return 0.0;
  return delta / kernel.log_moment();
}

double gross_exponent(const Model& model) {
  switch (model.demand().kind()) {
    case DemandClass::linear:
    case DemandClass::slowly_varying:
      return 1.0;
    case DemandClass::sigmoidal:
      return 1.0 + compute_alpha(model);
  }
  return 0.0;
}

ExponentReport compute_exponents(const Model& model) {
  ExponentReport rep;
  rep.d = compute_d(model);
  rep.alpha = compute_alpha(model);
  switch (model.demand().kind()) {
    case DemandClass::linear: rep.b = 3.0; rep.a_gross = 1.0; break;
    case DemandClass::slowly_varying: rep.b = 2.0; rep.a_gross = 1.0; break;
    case DemandClass::sigmoidal: rep.b = 2.0 + rep.alpha; rep.a_gross = 1.0 + rep.alpha; break;
  }
  rep.a_net = rep.b - 1.0;
  rep.minimal_income_residual = model.minimal_income_residual();
  return rep;
}

}  // namespace hierpareto
