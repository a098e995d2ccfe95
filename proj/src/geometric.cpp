#include "hierpareto/geometric.hpp"

#include "hierpareto/errors.hpp"

#include <cmath>

namespace hierpareto {

GeomProgSpec beta_factor(double gamma) {
  if (!(gamma > 0.0)) throw DomainError("beta_factor: gamma must be positive");
  GeomProgSpec spec;
  spec.mu = [gamma](int n) { return gamma / (gamma + n); };
  spec.sample = [gamma](Rng& rng) { return std::pow(rng.uniform(), 1.0 / gamma); };
  return spec;
}

GeomMoments geom_moments(const GeomProgSpec& spec, int N) {
  if (N < 0) throw DomainError("geom_moments: N must be nonnegative");
  GeomMoments out;
  out.corrected.assign(N + 1, 0.0);
  out.majorant.assign(N + 1, 0.0);
  out.corrected[0] = out.majorant[0] = 1.0;
  for (int n = 1; n <= N; ++n) {
    const double mu = spec.mu(n);
    if (!(mu >= 0.0 && mu < 1.0)) throw DomainError("geom_moments: need 0 <= mu_n < 1");
    double binom = 1.0, sc = 0.0, sm = 0.0;
    for (int k = 0; k < n; ++k) {
      sc += binom * out.corrected[k];
      sm += binom * out.majorant[k];
      binom = binom * (n - k) / (k + 1);
    }
    out.corrected[n] = mu / (1.0 - mu) * sc;
    out.majorant[n] = sm / (1.0 - mu);
  }
  return out;
}

namespace {

// sum_{n>=1} lambda^n/n! w(n), w bounded by wmax; stops once the remaining
// tail, bounded by wmax * term * e^lambda, is below 1e-12 of the sum.
template <class W>
double exp_series(double lambda, W w) {
  if (lambda == 0.0) return 0.0;
  double term = 1.0, sum = 0.0;
  for (int n = 1; n < 100000; ++n) {
    term *= lambda / n;
    const double wn = w(n);
    if (!std::isfinite(wn)) throw DivergenceError("exp_series: infinite coefficient");
    sum += term * wn;
    if (n > lambda && term * wn * std::exp(lambda) < 1e-12 * std::max(sum, 1e-300)) return sum;
  }
  throw DivergenceError("exp_series: series did not converge");
}

}  // namespace

double sigma_lambda(const GeomProgSpec& spec, double lambda, int k_max) {
  if (!(lambda >= 0.0)) throw DomainError("sigma_lambda: lambda must be nonnegative");
  double best = 0.0;
  for (int k = 1; k <= k_max; ++k) {
    const double v = exp_series(lambda, [&](int n) {
      const double mu = spec.mu(n + k);
      if (!(mu < 1.0)) throw DomainError("sigma_lambda: need mu_n < 1");
      return 1.0 / (1.0 - mu);
    });
    best = std::max(best, v);
  }
  return best;
}

double moment_series_L(const GeomProgSpec& spec, double lambda) {
  return exp_series(lambda, [&](int n) { return 1.0 / (1.0 - spec.mu(n)); });
}

double sigma_lambda_beta(double gamma, double lambda) {
  if (lambda == 0.0) return 0.0;
  const double e = std::expm1(lambda);
  return e + gamma * (e - lambda) / lambda;
}

double theorem2_gamma_max(double F_star, bool* is_void) {
  if (!(F_star > 0.0)) throw DomainError("theorem2_gamma_max: F* must be positive");
  const bool v = F_star >= std::log(2.0);
  if (is_void) *is_void = v;
  if (v) return 0.0;
  const double e = std::exp(F_star);
  return F_star * (2.0 - e) / (std::expm1(F_star) - F_star);
}

namespace {

struct MomentBlock {
  std::vector<Accumulator> acc;
};

}  // namespace

GeomMonteCarlo geom_moments_mc(const GeomProgSpec& spec, int N, std::size_t paths, RandomStream stream,
                               double trunc) {
  if (N < 1 || paths == 0) throw DomainError("geom_moments_mc: need N >= 1 and paths > 0");
  const auto blocks = run_blocks<MomentBlock>(paths, stream, [&](std::size_t begin, std::size_t end, Rng& rng) {
    MomentBlock b;
    b.acc.resize(N);
    for (std::size_t i = begin; i < end; ++i) {
      double prod = 1.0, g = 0.0;
      do {
        prod *= spec.sample(rng);
        g += prod;
      } while (prod > trunc);
      double p = 1.0;
      for (int n = 0; n < N; ++n) {
        p *= g;
        b.acc[n].add(p);
      }
    }
    return b;
  });
  GeomMonteCarlo out;
  std::vector<Accumulator> acc(N);
  for (const auto& b : blocks)
    for (int n = 0; n < N; ++n) acc[n].merge(b.acc[n]);
  for (int n = 0; n < N; ++n) {
    out.mean.push_back(acc[n].mean());
    out.std_error.push_back(acc[n].std_error());
  }
  return out;
}

}  // namespace hierpareto
