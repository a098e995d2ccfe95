#include "hierpareto/tails.hpp"

#include "hierpareto/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hierpareto {

std::string to_string(FitMethod m) {
  return m == FitMethod::hill ? "hill" : "loglog_regression";
}

double pareto_quantile(double a, double s_min, double u) {
  if (!(a > 0.0) || !(s_min > 0.0)) throw DomainError("pareto: need a > 0 and s_min > 0");
  if (!(u > 0.0 && u <= 1.0)) throw DomainError("pareto: u must lie in (0, 1]");
  return s_min * std::pow(u, -1.0 / a);
}

std::vector<double> sample_pareto(double a, double s_min, std::size_t n, RandomStream stream) {
  Rng rng(stream);
  std::vector<double> out(n);
  for (auto& v : out) v = pareto_quantile(a, s_min, rng.uniform());
  return out;
}

CcdfTable empirical_ccdf(std::span<const double> samples) {
  std::vector<double> s(samples.begin(), samples.end());
  std::sort(s.begin(), s.end());
  CcdfTable t;
  const double n = static_cast<double>(s.size());
  t.s = s;
  t.p.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) t.p[i] = (n - static_cast<double>(i)) / n;
  return t;
}

std::pair<double, double> ols_slope(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 3 || y.size() != n) throw DomainError("ols_slope: need at least three paired points");
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw DomainError("ols_slope: degenerate abscissae");
  const double b = sxy / sxx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - my - b * (x[i] - mx);
    rss += e * e;
  }
  return {b, std::sqrt(rss / (n - 2) / sxx)};
}

TailFit fit_exponent(std::span<const double> samples, FitMethod method, FitWindow window) {
  if (!(window.ccdf_lo > 0.0 && window.ccdf_lo < window.ccdf_hi && window.ccdf_hi <= 1.0))
    throw DomainError("fit_exponent: need 0 < ccdf_lo < ccdf_hi <= 1");
  for (double v : samples)
    if (!(v > 0.0)) throw DomainError("fit_exponent: samples must be positive");
  const CcdfTable t = empirical_ccdf(samples);
  const std::size_t n = t.s.size();
  TailFit fit;
  fit.method = method;

  if (method == FitMethod::hill) {
    const std::size_t k = static_cast<std::size_t>(std::floor(window.ccdf_hi * n));
    if (k < 30 || k >= n) throw DomainError("fit_exponent: too few points for the Hill estimator");
    const double threshold = t.s[n - k - 1];
    double sum = 0.0;
    for (std::size_t i = n - k; i < n; ++i) sum += std::log(t.s[i] / threshold);
    fit.a_hat = static_cast<double>(k) / sum;
    fit.std_error = fit.a_hat / std::sqrt(static_cast<double>(k));
    fit.points = k;
    fit.lower = threshold;
    fit.upper = t.s.back();
    return fit;
  }

  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < n; ++i) {
    if (t.p[i] < window.ccdf_lo || t.p[i] > window.ccdf_hi) continue;
    if (i > 0 && t.s[i] == t.s[i - 1]) continue;
    if (lx.empty()) fit.lower = t.s[i];
    fit.upper = t.s[i];
    lx.push_back(std::log(t.s[i]));
    ly.push_back(std::log(t.p[i]));
  }
  if (lx.size() < 30) throw DomainError("fit_exponent: fewer than 30 points in the fit window");
  const auto [slope, se] = ols_slope(lx, ly);
  fit.a_hat = -slope;
  fit.std_error = se;
  fit.points = lx.size();
  if (!(fit.a_hat > 0.0)) throw DomainError("fit_exponent: nonpositive exponent estimate");
  return fit;
}

namespace {

std::vector<double> ranks(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("spearman: need two equal-length samples");
  const auto rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double m = (n + 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - m) * (ry[i] - m);
    sxx += (rx[i] - m) * (rx[i] - m);
    syy += (ry[i] - m) * (ry[i] - m);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

std::vector<double> sample_mixture(double a1, double a2, double share, std::size_t n, RandomStream stream) {
  if (!(share >= 0.0 && share <= 1.0)) throw DomainError("sample_mixture: share must lie in [0, 1]");
  Rng rng(stream);
  std::vector<double> out(n);
  for (auto& v : out) {
    const bool first = rng.uniform() < share;
    v = pareto_quantile(first ? a1 : a2, 1.0, rng.uniform());
  }
  return out;
}

MixtureSweep mixture_experiment(double a1, double a2, std::size_t n, RandomStream stream, FitWindow window,
                                double lo, double hi, std::size_t steps) {
  if (!(a1 < a2)) throw DomainError("mixture_experiment: need a1 < a2");
  if (steps < 2) throw DomainError("mixture_experiment: need at least two shares");
  MixtureSweep sweep;
  sweep.window = window;
  std::vector<double> shares, fits;
  for (std::size_t k = 0; k < steps; ++k) {
    const double share = lo + (hi - lo) * static_cast<double>(k) / (steps - 1);
    const auto sample = sample_mixture(a1, a2, share, n, {stream.seed, (stream.stream_id << 16) + k});
    MixturePoint p{share, fit_exponent(sample, FitMethod::loglog_regression, window)};
    shares.push_back(share);
    fits.push_back(p.fit.a_hat);
    sweep.points.push_back(p);
  }
  sweep.spearman = spearman(shares, fits);
  return sweep;
}

}  // namespace hierpareto
