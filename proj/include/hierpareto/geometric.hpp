#pragma once

#include "hierpareto/random.hpp"

#include <functional>
#include <vector>

namespace hierpareto {

// Random geometric progression G = sum_{n>=1} prod_{k<=n} eta_k with iid
// factors eta in [0, 1]; mu(n) = E eta^n.
struct GeomProgSpec {
  std::function<double(int)> mu;
  std::function<double(Rng&)> sample;
};

// eta with density gamma eta^{gamma-1} on [0, 1]: mu_n = gamma / (gamma + n).
GeomProgSpec beta_factor(double gamma);

struct GeomMoments {
  std::vector<double> corrected;  // M_0..M_N, M_n = mu_n/(1-mu_n) sum C(n,k) M_k
  std::vector<double> majorant;   // M_0..M_N without the mu_n factor
};

GeomMoments geom_moments(const GeomProgSpec& spec, int N);

// sup_{k>=1} sum_{n>=1} lambda^n/n! / (1 - mu_{n+k}); the supremum is taken
// over k = 1..k_max (k = 1 suffices for nonincreasing mu).
double sigma_lambda(const GeomProgSpec& spec, double lambda, int k_max = 8);

// sum_{n>=1} lambda^n / (n! (1 - mu_n)).
double moment_series_L(const GeomProgSpec& spec, double lambda);

// Closed form of sigma_lambda for beta_factor(gamma).
double sigma_lambda_beta(double gamma, double lambda);

// Largest admissible d + 1 for a given F*; 0 (and void = true) once F* >= ln 2.
double theorem2_gamma_max(double F_star, bool* is_void = nullptr);

// Monte Carlo moments E G^n, n = 1..N, with standard errors; progressions are
// truncated once the running product drops below trunc.
struct GeomMonteCarlo {
  std::vector<double> mean;
  std::vector<double> std_error;
};

GeomMonteCarlo geom_moments_mc(const GeomProgSpec& spec, int N, std::size_t paths, RandomStream stream,
                               double trunc = 1e-17);

}  // namespace hierpareto
