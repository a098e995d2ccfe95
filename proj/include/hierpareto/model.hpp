#pragma once

// Primitive functions of the hierarchical income model: demand sigma(s),
// pair-interaction kernel R(s), welfare P(s), and the derived scalar
// functions R0, r, m_a, Z_alpha and C(x) consumed by every other module.
//
// Net income s lives on [1, inf) (the price scale fixes the minimal income
// at 1); most of the analysis uses x = 1/s in (0, 1].

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace hierpareto {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class DemandClass { linear, slowly_varying, sigmoidal };

std::string to_string(DemandClass c);
DemandClass demand_class_from_string(const std::string& name);

// Spending propensity sigma(s) of an agent with net income s >= 1.
//   linear          sigma(s) = s
//   slowly_varying  sigma(s) = 1 + ln s
//   sigmoidal       sigma(s) = S0 / (1 + (S0 - 1) s^-2),  S0 > 1
class Demand {
 public:
  static Demand linear();
  static Demand slowly_varying();
  static Demand sigmoidal(double saturation);

  DemandClass kind() const noexcept { return kind_; }
  // S0 for sigmoidal demand, +inf otherwise.
  double at_infinity() const noexcept { return kind_ == DemandClass::sigmoidal ? s0_ : kInf; }

  double operator()(double s) const;
  double derivative(double s) const;
  double derivative_at_one() const { return derivative(1.0); }

 private:
  Demand(DemandClass kind, double s0) : kind_(kind), s0_(s0) {}
  DemandClass kind_;
  double s0_;
};

enum class KernelFamily { exponential, tabulated };
enum class TailRule { zero, power };

// Pair-interaction intensity R(s), s >= 1 (zero below 1).
class Kernel {
 public:
  // R(s) = rate * exp(-rate (s - 1)).
  static Kernel exponential(double rate);
  // Samples of R on [1, s_max] (first abscissa must be 1), interpolated
  // log-log between positive samples; beyond s_max the tail is either zero
  // or the power law continuing the last two samples.
  static Kernel tabulated(std::vector<double> s, std::vector<double> values, TailRule tail);

  KernelFamily family() const noexcept { return family_; }
  double rate() const noexcept { return rate_; }

  double R(double s) const;
  double R0() const noexcept { return r0_; }
  double r(double s) const { return R(s) / r0_; }

  // Exponent a above which m_a diverges (+inf when every moment exists).
  double moment_divergence_threshold() const noexcept;

  // Right end of the support: last sample for a zero-tailed table, else +inf.
  double support_end() const noexcept;

  // m_a = int_1^inf s^a r(s) ds; nullopt when the integral diverges.
  std::optional<double> moment(double a) const;

  // Z_alpha(x) = int_1^{1/x} s^alpha r(s) ds for x in (0, 1].
  double z_alpha(double alpha, double x) const;

  // int_1^inf r(s) ln s ds.
  double log_moment() const;

  // int_lo^hi g(s) r(s) ds, split at the kernel's natural breakpoints.
  double integrate_r(const std::function<double(double)>& g, double lo, double hi,
                     double rel_tol = 1e-12) const;

 private:
  Kernel() = default;
  double integrate_R(const std::function<double(double)>& g, double lo, double hi,
                     double rel_tol) const;
  std::vector<double> breakpoints() const;

  KernelFamily family_ = KernelFamily::exponential;
  double rate_ = 0.0;
  std::vector<double> s_;
  std::vector<double> v_;
  TailRule tail_ = TailRule::zero;
  double tail_power_ = 0.0;
  double r0_ = 1.0;
};

enum class WelfareForm { rational, cutoff, tabulated };

// Welfare income P(s), nonincreasing and exactly zero from s_cut on.
class Welfare {
 public:
  // P(s) = amplitude / (1 + (s-1)^3), clamped to zero once it drops below 1e-12.
  static Welfare rational(double amplitude = 2.0);
  // P(s) = amplitude (1 - 3t^2 + 2t^3), t = (s-1)/(s_cut-1), zero for s >= s_cut.
  static Welfare cutoff(double amplitude, double s_cut);
  // Piecewise-linear samples starting at s = 1; zero beyond the last sample.
  static Welfare tabulated(std::vector<double> s, std::vector<double> values);

  WelfareForm form() const noexcept { return form_; }
  double cutoff_point() const noexcept { return s_cut_; }

  double operator()(double s) const;
  double derivative_at_one() const;

 private:
  Welfare() = default;
  WelfareForm form_ = WelfareForm::rational;
  double amplitude_ = 2.0;
  double s_cut_ = kInf;
  std::vector<double> s_;
  std::vector<double> v_;
};

struct ModelConfig {
  Demand demand = Demand::linear();
  Kernel kernel = Kernel::exponential(3.0);
  Welfare welfare = Welfare::rational();
  double x_star = 0.5;
};

// How far the declared x_star is from the simplifying assumptions
// P(1/x) = 0 and sigma(s) = s on [1, 1/x_star].
struct XStarAssumptions {
  double max_welfare = 0.0;       // max P(s) over s >= 1/x_star
  double max_demand_gap = 0.0;    // max |sigma(s) - s| over [1, 1/x_star]
  bool holds(double tol) const { return max_welfare <= tol && max_demand_gap <= tol; }
};

// A validated, immutable model instance.
class Model {
 public:
  static constexpr double kDefaultConsistencyTol = 1e-8;

  explicit Model(ModelConfig config, double consistency_tol = kDefaultConsistencyTol);

  const ModelConfig& config() const noexcept { return cfg_; }
  const Demand& demand() const noexcept { return cfg_.demand; }
  const Kernel& kernel() const noexcept { return cfg_.kernel; }
  const Welfare& welfare() const noexcept { return cfg_.welfare; }
  double x_star() const noexcept { return cfg_.x_star; }

  double sigma(double s) const { return cfg_.demand(s); }
  double R(double s) const { return cfg_.kernel.R(s); }
  double r(double s) const { return cfg_.kernel.r(s); }
  double R0() const noexcept { return cfg_.kernel.R0(); }
  double P(double s) const { return cfg_.welfare(s); }

  // 1 - P(1) + sigma(1) R0; zero for a consistent model.
  double minimal_income_residual() const noexcept { return residual_; }

  // C(x) = (s - P(s) + s sigma(s) R0) / (sigma(s) (s - 1)), s = 1/x, with its
  // limits C(0) = R0 + 1/sigma(inf) and C(1) = 1 - P'(1) + R0 (1 + sigma'(1)).
  double C(double x) const;
  double C0() const noexcept { return c0_; }
  double C1() const noexcept { return c1_; }
  double c(double x) const { return C(x) / c0_; }
  // inf of c over a probe grid of (0, 1].
  double c_star() const;

  double z_alpha(double alpha, double x) const { return cfg_.kernel.z_alpha(alpha, x); }

  XStarAssumptions x_star_assumptions() const;

 private:
  double numerator(double s) const;

  ModelConfig cfg_;
  double residual_ = 0.0;
  double c0_ = 0.0;
  double c1_ = 0.0;
};

}  // namespace hierpareto
