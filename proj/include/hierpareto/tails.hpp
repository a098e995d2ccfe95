#pragma once

#include "hierpareto/random.hpp"

#include <span>
#include <string>
#include <vector>

namespace hierpareto {

enum class FitMethod { loglog_regression, hill };
std::string to_string(FitMethod m);

struct TailFit {
  double a_hat = 0.0;
  double std_error = 0.0;
  double lower = 0.0;  // fit range in the sample domain
  double upper = 0.0;
  std::size_t points = 0;
  FitMethod method = FitMethod::loglog_regression;
};

// Window of empirical CCDF levels P(X >= s) used by a fit. For the Hill
// estimator only ccdf_hi matters: k = floor(ccdf_hi * n) top order statistics.
struct FitWindow {
  double ccdf_lo = 1e-3;
  double ccdf_hi = 1e-1;
};

// s = s_min U^{-1/a}.
double pareto_quantile(double a, double s_min, double u);
std::vector<double> sample_pareto(double a, double s_min, std::size_t n, RandomStream stream);

struct CcdfTable {
  std::vector<double> s;
  std::vector<double> p;  // P(X >= s)
};

CcdfTable empirical_ccdf(std::span<const double> samples);

TailFit fit_exponent(std::span<const double> samples, FitMethod method, FitWindow window = {});

// Least-squares line through (x, y); returns slope and its standard error.
std::pair<double, double> ols_slope(std::span<const double> x, std::span<const double> y);

double spearman(std::span<const double> x, std::span<const double> y);

// Each point is Pareto(a1) with probability `share`, else Pareto(a2); s_min = 1.
std::vector<double> sample_mixture(double a1, double a2, double share, std::size_t n, RandomStream stream);

struct MixturePoint {
  double share = 0.0;
  TailFit fit;
};

struct MixtureSweep {
  FitWindow window;
  std::vector<MixturePoint> points;
  double spearman = 0.0;  // share versus a_mix
};

// Shares from lo to hi in `steps` equal increments.
MixtureSweep mixture_experiment(double a1, double a2, std::size_t n, RandomStream stream, FitWindow window = {},
                                double lo = 0.05, double hi = 0.95, std::size_t steps = 19);

}  // namespace hierpareto
