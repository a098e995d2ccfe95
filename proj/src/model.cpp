#include "hierpareto/model.hpp"

#include "hierpareto/errors.hpp"
#include "hierpareto/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace hierpareto {

std::string to_string(DemandClass c) {
  switch (c) {
    case DemandClass::linear: return "linear";
    case DemandClass::slowly_varying: return "slowly_varying";
    case DemandClass::sigmoidal: return "sigmoidal";
  }
  return "unknown";
}

DemandClass demand_class_from_string(const std::string& name) {
  if (name == "linear" || name == "l") return DemandClass::linear;
  if (name == "slowly_varying" || name == "u") return DemandClass::slowly_varying;
  if (name == "sigmoidal" || name == "s") return DemandClass::sigmoidal;
  throw ConfigError("unknown demand class '" + name + "'");
}

// ---------------------------------------------------------------- Demand

Demand Demand::linear() { return Demand(DemandClass::linear, kInf); }
Demand Demand::slowly_varying() { return Demand(DemandClass::slowly_varying, kInf); }

Demand Demand::sigmoidal(double saturation) {
  if (!(saturation > 1.0) || !std::isfinite(saturation))
    throw ConfigError("sigmoidal demand needs a finite saturation level S0 > 1");
  return Demand(DemandClass::sigmoidal, saturation);
}

double Demand::operator()(double s) const {
  if (!(s >= 1.0)) throw DomainError("demand evaluated below the minimal income s = 1");
  switch (kind_) {
    case DemandClass::linear: return s;
    case DemandClass::slowly_varying: return 1.0 + std::log(s);
    case DemandClass::sigmoidal: return s0_ / (1.0 + (s0_ - 1.0) / (s * s));
  }
  return s;
}

double Demand::derivative(double s) const {
  if (!(s >= 1.0)) throw DomainError("demand derivative evaluated below s = 1");
  switch (kind_) {
    case DemandClass::linear: return 1.0;
    case DemandClass::slowly_varying: return 1.0 / s;
    case DemandClass::sigmoidal: {
      const double q = 1.0 + (s0_ - 1.0) / (s * s);
      return s0_ * 2.0 * (s0_ - 1.0) / (s * s * s * q * q);
    }
  }
  return 1.0;
}

// ---------------------------------------------------------------- Kernel

Kernel Kernel::exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw ConfigError("exponential kernel needs rate > 0");
  Kernel k;
  k.family_ = KernelFamily::exponential;
  k.rate_ = rate;
  k.r0_ = 1.0;  // int_1^inf rate e^{-rate (s-1)} ds
  return k;
}

Kernel Kernel::tabulated(std::vector<double> s, std::vector<double> values, TailRule tail) {
  if (s.size() < 2 || s.size() != values.size())
    throw ConfigError("tabulated kernel needs at least two (s, R) samples");
  if (std::abs(s.front() - 1.0) > 1e-12) throw ConfigError("tabulated kernel must start at s = 1");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(values[i] >= 0.0) || !std::isfinite(values[i])) throw ConfigError("tabulated kernel values must be finite and >= 0");
    if (i > 0 && !(s[i] > s[i - 1])) throw ConfigError("tabulated kernel abscissae must increase");
  }
  if (!(values.front() > 0.0)) throw ConfigError("tabulated kernel needs R(1) > 0");

  Kernel k;
  k.family_ = KernelFamily::tabulated;
  k.s_ = std::move(s);
  k.v_ = std::move(values);
  k.tail_ = tail;
  if (tail == TailRule::power) {
    const std::size_t n = k.s_.size();
    const double a = k.v_[n - 2], b = k.v_[n - 1];
    if (!(a > 0.0 && b > 0.0)) throw ConfigError("power tail needs positive final samples");
    k.tail_power_ = -std::log(b / a) / std::log(k.s_[n - 1] / k.s_[n - 2]);
    if (!(k.tail_power_ > 1.0)) throw DivergenceError("kernel tail too heavy: R0 diverges");
  }
  k.r0_ = 1.0;
  k.r0_ = k.integrate_R([](double) { return 1.0; }, 1.0, kInf, 1e-13);
  if (!(k.r0_ > 0.0)) throw ConfigError("kernel has zero total intensity");
  return k;
}

double Kernel::R(double s) const {
  if (s < 1.0) return 0.0;
  if (family_ == KernelFamily::exponential) return rate_ * std::exp(-rate_ * (s - 1.0));

  const std::size_t n = s_.size();
  if (s >= s_.back()) {
    if (s == s_.back()) return v_.back();
    if (tail_ == TailRule::zero) return 0.0;
    return v_.back() * std::pow(s / s_.back(), -tail_power_);
  }
  const auto it = std::upper_bound(s_.begin(), s_.end(), s);
  const std::size_t j = static_cast<std::size_t>(it - s_.begin()) - 1;
  const double s0 = s_[j], s1 = s_[std::min(j + 1, n - 1)];
  const double v0 = v_[j], v1 = v_[std::min(j + 1, n - 1)];
  if (v0 > 0.0 && v1 > 0.0) {
    const double t = std::log(s / s0) / std::log(s1 / s0);
    return v0 * std::pow(v1 / v0, t);
  }
  const double t = (s - s0) / (s1 - s0);
  return v0 + t * (v1 - v0);
}

double Kernel::support_end() const noexcept {
  if (family_ == KernelFamily::tabulated && tail_ == TailRule::zero) return s_.back();
  return kInf;
}

double Kernel::moment_divergence_threshold() const noexcept {
  if (family_ == KernelFamily::tabulated && tail_ == TailRule::power) return tail_power_ - 1.0;
  return kInf;
}

std::vector<double> Kernel::breakpoints() const {
  if (family_ == KernelFamily::exponential) {
    std::vector<double> b{1.0};
    for (double m : {0.25, 1.0, 4.0, 16.0, 64.0}) b.push_back(1.0 + m / rate_);
    return b;
  }
  return s_;
}

double Kernel::integrate_R(const std::function<double(double)>& g, double lo, double hi,
                           double rel_tol) const {
  if (hi <= lo) return 0.0;
  lo = std::max(lo, 1.0);
  if (hi <= lo) return 0.0;
  auto f = [&](double s) {
    const double rv = R(s);
    return rv == 0.0 ? 0.0 : g(s) * rv;
  };
  const auto bp = breakpoints();
  double total = 0.0;
  double a = lo;
  for (double b : bp) {
    if (b <= a) continue;
    const double top = std::min(b, hi);
    total += quad::integrate(f, a, top, rel_tol);
    a = top;
    if (a >= hi) return total;
  }
  const bool zero_tail = family_ == KernelFamily::tabulated && tail_ == TailRule::zero;
  if (a < hi && !zero_tail) total += quad::integrate(f, a, hi, rel_tol);
  return total;
}

double Kernel::integrate_r(const std::function<double(double)>& g, double lo, double hi,
                           double rel_tol) const {
  return integrate_R(g, lo, hi, rel_tol) / r0_;
}

std::optional<double> Kernel::moment(double a) const {
  if (a >= moment_divergence_threshold()) return std::nullopt;
  if (a == 0.0) return 1.0;
  try {
    return integrate_r([a](double s) { return std::pow(s, a); }, 1.0, kInf);
  } catch (const DivergenceError&) {
    return std::nullopt;
  }
}

double Kernel::z_alpha(double alpha, double x) const {
  if (!(x > 0.0 && x <= 1.0)) throw DomainError("Z_alpha needs x in (0, 1]");
  if (x == 1.0) return 0.0;
  return integrate_r([alpha](double s) { return std::pow(s, alpha); }, 1.0, 1.0 / x);
}

double Kernel::log_moment() const {
  if (moment_divergence_threshold() <= 0.0) throw DivergenceError("log-moment of the kernel diverges");
  return integrate_r([](double s) { return std::log(s); }, 1.0, kInf);
}

// ---------------------------------------------------------------- Welfare

Welfare Welfare::rational(double amplitude) {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) throw ConfigError("welfare amplitude must be >= 0");
  Welfare w;
  w.form_ = WelfareForm::rational;
  w.amplitude_ = amplitude;
  // amplitude / (1 + (s-1)^3) < 1e-12 beyond this point.
  w.s_cut_ = 1.0 + std::cbrt(amplitude * 1e12);
  return w;
}

Welfare Welfare::cutoff(double amplitude, double s_cut) {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) throw ConfigError("welfare amplitude must be >= 0");
  if (!(s_cut > 1.0) || !std::isfinite(s_cut)) throw ConfigError("welfare cutoff must be finite and > 1");
  Welfare w;
  w.form_ = WelfareForm::cutoff;
  w.amplitude_ = amplitude;
  w.s_cut_ = s_cut;
  return w;
}

Welfare Welfare::tabulated(std::vector<double> s, std::vector<double> values) {
  if (s.size() < 2 || s.size() != values.size()) throw ConfigError("tabulated welfare needs at least two samples");
  if (std::abs(s.front() - 1.0) > 1e-12) throw ConfigError("tabulated welfare must start at s = 1");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(values[i] >= 0.0)) throw ConfigError("welfare must be nonnegative");
    if (i > 0 && !(s[i] > s[i - 1])) throw ConfigError("welfare abscissae must increase");
    if (i > 0 && values[i] > values[i - 1]) throw ConfigError("welfare must be nonincreasing");
  }
  Welfare w;
  w.form_ = WelfareForm::tabulated;
  w.amplitude_ = values.front();
  w.s_cut_ = s.back();
  w.s_ = std::move(s);
  w.v_ = std::move(values);
  return w;
}

double Welfare::operator()(double s) const {
  if (!(s >= 1.0)) throw DomainError("welfare evaluated below s = 1");
  if (s >= s_cut_) return 0.0;
  switch (form_) {
    case WelfareForm::rational: {
      const double u = s - 1.0;
      return amplitude_ / (1.0 + u * u * u);
    }
    case WelfareForm::cutoff: {
      const double t = (s - 1.0) / (s_cut_ - 1.0);
      return amplitude_ * (1.0 - t * t * (3.0 - 2.0 * t));
    }
    case WelfareForm::tabulated: {
      const auto it = std::upper_bound(s_.begin(), s_.end(), s);
      const std::size_t j = static_cast<std::size_t>(it - s_.begin()) - 1;
      const double t = (s - s_[j]) / (s_[j + 1] - s_[j]);
      return v_[j] + t * (v_[j + 1] - v_[j]);
    }
  }
  return 0.0;
}

double Welfare::derivative_at_one() const {
  switch (form_) {
    case WelfareForm::rational:
    case WelfareForm::cutoff:
      return 0.0;
    case WelfareForm::tabulated:
      return (v_[1] - v_[0]) / (s_[1] - s_[0]);
  }
  return 0.0;
}

// ---------------------------------------------------------------- Model

Model::Model(ModelConfig config, double consistency_tol) : cfg_(std::move(config)) {
  if (!(cfg_.x_star > 0.0 && cfg_.x_star < 1.0)) throw ConfigError("x_star must lie in (0, 1)");
  const double r0 = R0();
  residual_ = 1.0 - P(1.0) + sigma(1.0) * r0;
  if (!(std::abs(residual_) <= consistency_tol))
    throw ConfigError("inconsistent minimal income: 1 - P(1) + sigma(1) R0 = " + std::to_string(residual_));
  const double inf_sigma = cfg_.demand.at_infinity();
  c0_ = r0 + (std::isinf(inf_sigma) ? 0.0 : 1.0 / inf_sigma);
  c1_ = 1.0 - cfg_.welfare.derivative_at_one() + r0 * (1.0 + cfg_.demand.derivative_at_one());
  if (!(c1_ > 0.0)) throw ConfigError("C(1) must be positive");
}

double Model::numerator(double s) const {
  return s - P(s) + s * sigma(s) * R0();
}

double Model::C(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("C(x) needs x in [0, 1]");
  if (x == 1.0) return c1_;
  if (x < 1e-280) return c0_;
  constexpr double kNearOne = 1e-7;
  auto quotient = [this](double xq) {
    const double s = 1.0 / xq;
    return (numerator(s) - numerator(1.0)) / (sigma(s) * (s - 1.0));
  };
  if (1.0 - x < kNearOne) {
    // Cancellation in N(s) - N(1) dominates here; blend toward the limit.
    const double xb = 1.0 - kNearOne;
    return c1_ + (quotient(xb) - c1_) * (1.0 - x) / (1.0 - xb);
  }
  return quotient(x);
}

double Model::c_star() const {
  double best = C0();
  for (int i = 0; i <= 400; ++i) {
    const double x = std::pow(10.0, -10.0 + 10.0 * i / 400.0);
    best = std::min(best, C(x));
  }
  for (int i = 0; i <= 400; ++i) best = std::min(best, C(i / 400.0));
  return best / C0();
}

XStarAssumptions Model::x_star_assumptions() const {
  XStarAssumptions out;
  const double s_hi = 1.0 / cfg_.x_star;
  out.max_welfare = P(s_hi);
  for (int i = 0; i <= 1000; ++i) {
    const double s = 1.0 + (s_hi - 1.0) * i / 1000.0;
    out.max_demand_gap = std::max(out.max_demand_gap, std::abs(sigma(s) - s));
  }
  return out;
}

}  // namespace hierpareto
