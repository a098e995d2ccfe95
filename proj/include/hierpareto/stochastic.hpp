#pragma once

#include "hierpareto/model.hpp"
#include "hierpareto/random.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace hierpareto {

// Law of xi with density s^alpha r(s) on [1, inf), truncated on demand to
// [1, 1/x]. G(s) = int_1^s t^alpha r(t) dt is tabulated once on a log-spaced
// grid (cubic Hermite with exact slopes) and inverted by safeguarded Newton.
class XiSampler {
 public:
  XiSampler(const Kernel& kernel, double alpha, std::size_t cells = 8192);

  double G(double s) const;
  double top() const noexcept { return s_top_; }
  // s with G(s) = target, target in [0, G(top)].
  double inverse(double target) const;

 private:
  double hermite(std::size_t k, double t) const;
  double hermite_slope(std::size_t k, double t) const;

  double s_top_ = 1.0;
  double du_ = 0.0;
  std::vector<double> g_;   // G at u_k = k du
  std::vector<double> dg_;  // dG/du at u_k
};

struct ChainPath {
  std::vector<double> states;  // only filled when requested
  std::size_t exit_index = 0;  // steps taken
  double F_product = 1.0;
  bool capped = false;
};

// Monotone Markov chain on (0, 1] whose F-weighted expectation reproduces
// the balance operator:
//   x <= x_star: x' = x xi, xi ~ s^alpha r(s) / Z_alpha(x) on [1, 1/x];
//   x >  x_star: x' = 1 - (1-x) U^{1/(d+1)}.
class MarkovChain {
 public:
  explicit MarkovChain(Model model);
  MarkovChain(Model model, double alpha, double d);

  const Model& model() const noexcept { return model_; }
  double alpha() const noexcept { return alpha_; }
  double d() const noexcept { return d_; }
  double x_star() const noexcept { return model_.x_star(); }
  const XiSampler& xi() const noexcept { return xi_; }

  // Z_alpha(x) from the G table.
  double z(double x) const;

  double sample_xi(double x, Rng& rng) const;
  double step(double x, Rng& rng) const;

  double F(double x, double y) const;
  double transition_density(double x, double y) const;

  // E_x[F(x, x_1) h(x_1)] by adaptive quadrature.
  double expect_F(double x, const std::function<double(double)>& h) const;

  // Runs from x until the state exceeds 1 - eps_stop (or the cap is hit).
  ChainPath run_path(double x, Rng& rng, double eps_stop = 1e-6, std::size_t cap = 1000000,
                     bool keep_states = false) const;

 private:
  Model model_;
  double alpha_;
  double d_;
  XiSampler xi_;
};

struct MCEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t paths = 0;
  std::size_t capped = 0;
};

// Mean of the F-product over n_paths chains started at x.
MCEstimate estimate_rho_mc(const MarkovChain& chain, double x, std::size_t n_paths, RandomStream stream,
                           double eps_stop = 1e-6, bool parallel = true);

struct ExitSample {
  std::size_t steps = 0;  // first n with x_n > x_star
  bool capped = false;
};

ExitSample simulate_exit(const MarkovChain& chain, double x, Rng& rng, std::size_t cap = 1000000);

struct ExitBound {
  std::size_t N = 1;
  double bound = 1.0;     // lower bound on P{exit within N steps}
  double Y_lower = 0.0;   // E_{x_star} ln xi
  double Y_upper = 0.0;   // ln(x_star / x)
  bool applicable = true; // false when 2 Y_upper / Y_lower - 1 < 1
};

ExitBound exit_time_bound(const MarkovChain& chain, double x);

struct ExitStats {
  std::size_t paths = 0;
  std::size_t capped = 0;
  std::size_t within_N = 0;
  double prob_within_N = 0.0;
  double std_error = 0.0;
  double mean_steps = 0.0;
};

ExitStats exit_statistics(const MarkovChain& chain, double x, std::size_t N, std::size_t n_paths,
                          RandomStream stream);

// Fills one trial of n draws Y_1..Y_n.
using SequenceGenerator = std::function<void(Rng&, std::span<double>)>;

struct AntiChebyshevResult {
  double empirical = 0.0;
  double std_error = 0.0;
  double bound = 0.0;
  bool pass = false;
};

// P{sum Y_k > n Y_lower / 2} versus 1 / (2 Y_upper / Y_lower - 1). Throws
// DomainError if a draw leaves [0, Y_upper].
AntiChebyshevResult anti_chebyshev_check(const SequenceGenerator& gen, std::size_t n, double Y_lower,
                                         double Y_upper, std::size_t trials, RandomStream stream);

// Y_k = ln(x_{k+1}/x_k) of the lower branch started at x0, restarting at x0
// whenever the chain leaves (0, x_star]. Each draw is bounded by ln(1/x0)
// and has conditional mean at least E_{x_star} ln xi.
SequenceGenerator chain_log_increments(const MarkovChain& chain, double x0);

struct LowerBoundConstants {
  double mu = 0.0;
  double e_star = 0.0;
  double lambda_star = 0.0;
  double g = 0.0;
  double C = 0.0;
  double Y_lower = 0.0;
  double kappa = 1.0;        // inf_{x <= x_star} E_x (1 - x_1)^d for d > 0
  double flat_factor = 0.0;  // kappa exp(-mu / (1 - e_star))
};

// Constants of the positivity bounds on rho below x_star. Throws DomainError
// if the tail condition fails or, for slowly varying demand, x_star > e^-2.
LowerBoundConstants lower_bound_constants(const MarkovChain& chain);

// rho_min e^{-C} (ln 1/x)^{-g} kappa for slowly varying demand.
double u_lower_bound(const LowerBoundConstants& k, double rho_min, double x);

struct FStarEstimate {
  double probe_max = 0.0;
  double closed_form_bound = 0.0;  // monotone-kernel bound
  std::size_t lattice = 0;
};

FStarEstimate f_star_estimate(const MarkovChain& chain, std::size_t lattice = 400);

}  // namespace hierpareto
