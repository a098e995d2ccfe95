#include "hierpareto/stochastic.hpp"

#include "hierpareto/errors.hpp"
#include "hierpareto/exponents.hpp"
#include "hierpareto/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace hierpareto {

// ---- XiSampler -------------------------------------------------------------

XiSampler::XiSampler(const Kernel& kernel, double alpha, std::size_t cells) {
  if (cells < 16) throw DomainError("XiSampler: too few cells");
  if (kernel.family() == KernelFamily::exponential) {
    s_top_ = 1.0 + (80.0 + 40.0 * alpha) / kernel.rate();
  } else if (std::isfinite(kernel.support_end())) {
    s_top_ = kernel.support_end();
  } else {
    s_top_ = 1e12;
  }
  const double u_top = std::log(s_top_);
  du_ = u_top / static_cast<double>(cells);

  auto slope = [&](double u) {
    const double s = std::exp(u);
    return std::exp((alpha + 1.0) * u) * kernel.r(s);
  };
  const auto& gl = quad::legendre_unit(10);
  g_.assign(cells + 1, 0.0);
  dg_.assign(cells + 1, 0.0);
  for (std::size_t k = 0; k <= cells; ++k) dg_[k] = slope(k * du_);
  for (std::size_t k = 0; k < cells; ++k) {
    double acc = 0.0;
    for (std::size_t q = 0; q < gl.nodes.size(); ++q) acc += gl.weights[q] * slope((k + gl.nodes[q]) * du_);
    g_[k + 1] = g_[k] + du_ * acc;
  }
}

double XiSampler::hermite(std::size_t k, double t) const {
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * g_[k] + (t3 - 2 * t2 + t) * du_ * dg_[k] + (-2 * t3 + 3 * t2) * g_[k + 1] +
         (t3 - t2) * du_ * dg_[k + 1];
}

double XiSampler::hermite_slope(std::size_t k, double t) const {
  const double t2 = t * t;
  return (6 * t2 - 6 * t) * g_[k] + (3 * t2 - 4 * t + 1) * du_ * dg_[k] + (-6 * t2 + 6 * t) * g_[k + 1] +
         (3 * t2 - 2 * t) * du_ * dg_[k + 1];
}

double XiSampler::G(double s) const {
  if (s <= 1.0) return 0.0;
  if (s >= s_top_) return g_.back();
  const double u = std::log(s) / du_;
  const std::size_t k = std::min(static_cast<std::size_t>(u), g_.size() - 2);
  return hermite(k, u - static_cast<double>(k));
}

double XiSampler::inverse(double target) const {
  if (target <= 0.0) return 1.0;
  if (target >= g_.back()) return s_top_;
  const auto it = std::upper_bound(g_.begin(), g_.end(), target);
  const std::size_t k = std::min(static_cast<std::size_t>(it - g_.begin()) - 1, g_.size() - 2);
  double lo = 0.0, hi = 1.0;
  double t = (g_[k + 1] > g_[k]) ? (target - g_[k]) / (g_[k + 1] - g_[k]) : 0.5;
  for (int it2 = 0; it2 < 60; ++it2) {
    const double f = hermite(k, t) - target;
    if (f > 0.0) hi = t; else lo = t;
    if (std::abs(f) <= 1e-16 * std::max(1.0, std::abs(target)) || hi - lo < 1e-15) break;
    const double fp = hermite_slope(k, t);
    double next = fp > 0.0 ? t - f / fp : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    t = next;
  }
  return std::exp((static_cast<double>(k) + t) * du_);
}

// ---- MarkovChain -----------------------------------------------------------

MarkovChain::MarkovChain(Model model)
    : MarkovChain(model, compute_alpha(model), compute_d(model)) {}

MarkovChain::MarkovChain(Model model, double alpha, double d)
    : model_(std::move(model)), alpha_(alpha), d_(d), xi_(model_.kernel(), alpha) {
  if (!(d > -1.0)) throw DomainError("boundary exponent d must exceed -1");
}

double MarkovChain::z(double x) const {
  if (!(x > 0.0 && x <= 1.0)) throw DomainError("Z_alpha: x must lie in (0, 1]");
  return xi_.G(1.0 / x);
}

double MarkovChain::sample_xi(double x, Rng& rng) const {
  const double zx = z(x);
  if (!(zx > 0.0)) throw DomainError("sample_xi: no kernel mass on [1, 1/x]");
  return std::min(xi_.inverse(rng.uniform() * zx), 1.0 / x);
}

double MarkovChain::step(double x, Rng& rng) const {
  if (!(x > 0.0 && x < 1.0)) throw DomainError("step: x must lie in (0, 1)");
  double y;
  if (x <= x_star()) {
    y = std::min(1.0, x * sample_xi(x, rng));
  } else {
    y = 1.0 - (1.0 - x) * std::pow(rng.uniform(), 1.0 / (d_ + 1.0));
  }
  if (y <= x) y = std::nextafter(x, 2.0);
  return y;
}

double MarkovChain::F(double x, double y) const {
  if (!(x > 0.0 && x <= 1.0) || !(y >= x && y <= 1.0)) throw DomainError("F: need 0 < x <= y <= 1");
  if (x == 1.0) return 1.0;
  if (x <= x_star()) {
    double f = z(x) * model_.R0() / ((1.0 - x) * model_.C(x));
    if (d_ != 0.0) f *= std::pow((1.0 - y) / (1.0 - x), d_);
    return f;
  }
  const double ratio = y / x;
  double f = model_.C1() / (x * model_.C(x)) * model_.R(ratio) / model_.R(1.0);
  if (alpha_ != 0.0) f *= std::pow(ratio, alpha_);
  return f;
}

double MarkovChain::transition_density(double x, double y) const {
  if (!(x > 0.0 && x < 1.0)) throw DomainError("transition_density: x must lie in (0, 1)");
  if (y <= x || y > 1.0) return 0.0;
  if (x <= x_star()) {
    const double s = y / x;
    return std::pow(s, alpha_) * model_.r(s) / (x * z(x));
  }
  return (d_ + 1.0) * std::pow(1.0 - y, d_) / std::pow(1.0 - x, d_ + 1.0);
}

double MarkovChain::expect_F(double x, const std::function<double(double)>& h) const {
  if (!(x > 0.0 && x < 1.0)) throw DomainError("expect_F: x must lie in (0, 1)");
  if (x <= x_star()) {
    const Kernel& k = model_.kernel();
    const double zx = k.z_alpha(alpha_, x);
    auto g = [&](double s) {
      const double y = std::min(1.0, x * s);
      return std::pow(s, alpha_) * F(x, y) * h(y);
    };
    if (d_ == 0.0) return k.integrate_r(g, 1.0, 1.0 / x, 1e-12) / zx;
    // (1-y)^d is singular at y = 1 for d < 0 (and has a root for d > 0), so the
    // top half goes through v = ((1-y)/(1-x))^{d+1}, which absorbs it.
    const double s_mid = 0.5 * (1.0 + 1.0 / x);
    const double head = k.integrate_r(g, 1.0, s_mid, 1e-12) / zx;
    const double f0 = zx * model_.R0() / ((1.0 - x) * model_.C(x));
    const double v_max = std::pow((1.0 - x * s_mid) / (1.0 - x), d_ + 1.0);
    auto tail = [&](double v) {
      const double y = 1.0 - (1.0 - x) * std::pow(v, 1.0 / (d_ + 1.0));
      const double s = y / x;
      return f0 * h(y) * std::pow(s, alpha_) * k.r(s) / (x * zx) * (1.0 - x) / (d_ + 1.0);
    };
    return head + quad::integrate(tail, 0.0, v_max, 1e-12);
  }
  // v = ((1-y)/(1-x))^{d+1} is uniform under the upper-branch law.
  auto g = [&](double v) {
    const double y = 1.0 - (1.0 - x) * std::pow(v, 1.0 / (d_ + 1.0));
    return F(x, y) * h(y);
  };
  return quad::integrate(g, 0.0, 1.0, 1e-12);
}

ChainPath MarkovChain::run_path(double x, Rng& rng, double eps_stop, std::size_t cap, bool keep_states) const {
  if (!(x > 0.0 && x <= 1.0)) throw DomainError("run_path: x must lie in (0, 1]");
  ChainPath p;
  if (keep_states) p.states.push_back(x);
  while (x <= 1.0 - eps_stop) {
    if (p.exit_index >= cap) {
      p.capped = true;
      break;
    }
    const double y = step(x, rng);
    p.F_product *= F(x, y);
    ++p.exit_index;
    x = y;
    if (keep_states) p.states.push_back(x);
  }
  return p;
}

// ---- Monte Carlo drivers ---------------------------------------------------

namespace {

struct PathBlock {
  Accumulator acc;
  std::size_t capped = 0;
};

}  // namespace

MCEstimate estimate_rho_mc(const MarkovChain& chain, double x, std::size_t n_paths, RandomStream stream,
                           double eps_stop, bool parallel) {
  if (n_paths == 0) throw DomainError("estimate_rho_mc: need at least one path");
  auto work = [&](std::size_t begin, std::size_t end, Rng& rng) {
    PathBlock out;
    for (std::size_t i = begin; i < end; ++i) {
      const ChainPath p = chain.run_path(x, rng, eps_stop);
      if (p.capped) ++out.capped;
      else out.acc.add(p.F_product);
    }
    return out;
  };
  const auto blocks = parallel ? run_blocks<PathBlock>(n_paths, stream, work)
                               : run_blocks_serial<PathBlock>(n_paths, stream, work);
  PathBlock total;
  for (const auto& b : blocks) {
    total.acc.merge(b.acc);
    total.capped += b.capped;
  }
  return {total.acc.mean(), total.acc.std_error(), n_paths, total.capped};
}

ExitSample simulate_exit(const MarkovChain& chain, double x, Rng& rng, std::size_t cap) {
  if (!(x > 0.0 && x < chain.x_star())) throw DomainError("simulate_exit: need 0 < x < x_star");
  ExitSample e;
  while (x <= chain.x_star()) {
    if (e.steps >= cap) {
      e.capped = true;
      break;
    }
    x = chain.step(x, rng);
    ++e.steps;
  }
  return e;
}

namespace {

double mean_log_xi(const MarkovChain& chain) {
  const Kernel& k = chain.model().kernel();
  const double xs = chain.x_star();
  const double a = chain.alpha();
  const double num = k.integrate_r([a](double s) { return std::log(s) * std::pow(s, a); }, 1.0, 1.0 / xs, 1e-12);
  return num / k.z_alpha(a, xs);
}

}  // namespace

ExitBound exit_time_bound(const MarkovChain& chain, double x) {
  const double xs = chain.x_star();
  if (!(x > 0.0 && x <= xs)) throw DomainError("exit_time_bound: need 0 < x <= x_star");
  ExitBound b;
  b.Y_lower = mean_log_xi(chain);
  if (!(b.Y_lower > 0.0)) throw DomainError("exit_time_bound: E ln xi at x_star is not positive");
  b.Y_upper = std::log(xs / x);
  if (b.Y_upper <= 0.0) return b;
  b.N = static_cast<std::size_t>(std::floor(2.0 * b.Y_upper / b.Y_lower)) + 1;
  const double denom = 2.0 * b.Y_upper / b.Y_lower - 1.0;
  b.applicable = denom >= 1.0;
  b.bound = b.applicable ? 1.0 / denom : 1.0;
  return b;
}

namespace {

struct ExitBlock {
  std::size_t capped = 0;
  std::size_t within = 0;
  double steps = 0.0;
  Accumulator hit;
};

}  // namespace

ExitStats exit_statistics(const MarkovChain& chain, double x, std::size_t N, std::size_t n_paths,
                          RandomStream stream) {
  const auto blocks = run_blocks<ExitBlock>(n_paths, stream, [&](std::size_t begin, std::size_t end, Rng& rng) {
    ExitBlock out;
    for (std::size_t i = begin; i < end; ++i) {
      const ExitSample e = simulate_exit(chain, x, rng);
      if (e.capped) ++out.capped;
      const bool in = !e.capped && e.steps <= N;
      out.within += in;
      out.hit.add(in ? 1.0 : 0.0);
      out.steps += static_cast<double>(e.steps);
    }
    return out;
  });
  ExitStats s;
  s.paths = n_paths;
  Accumulator hit;
  double steps = 0.0;
  for (const auto& b : blocks) {
    s.capped += b.capped;
    s.within_N += b.within;
    hit.merge(b.hit);
    steps += b.steps;
  }
  s.prob_within_N = hit.mean();
  s.std_error = hit.std_error();
  s.mean_steps = steps / static_cast<double>(n_paths);
  return s;
}

AntiChebyshevResult anti_chebyshev_check(const SequenceGenerator& gen, std::size_t n, double Y_lower,
                                         double Y_upper, std::size_t trials, RandomStream stream) {
  if (n == 0 || trials == 0) throw DomainError("anti_chebyshev_check: need n > 0 and trials > 0");
  if (!(Y_lower > 0.0) || !(Y_upper >= Y_lower)) throw DomainError("anti_chebyshev_check: need 0 < Y_lower <= Y_upper");
  const double level = 0.5 * static_cast<double>(n) * Y_lower;
  const auto blocks = run_blocks<Accumulator>(trials, stream, [&](std::size_t begin, std::size_t end, Rng& rng) {
    Accumulator acc;
    std::vector<double> y(n);
    for (std::size_t i = begin; i < end; ++i) {
      gen(rng, y);
      double sum = 0.0;
      for (double v : y) {
        if (!(v >= 0.0 && v <= Y_upper)) throw DomainError("anti_chebyshev_check: draw outside [0, Y_upper]");
        sum += v;
      }
      acc.add(sum > level ? 1.0 : 0.0);
    }
    return acc;
  });
  Accumulator acc;
  for (const auto& b : blocks) acc.merge(b);
  AntiChebyshevResult r;
  r.empirical = acc.mean();
  r.std_error = acc.std_error();
  r.bound = 1.0 / (2.0 * Y_upper / Y_lower - 1.0);
  r.pass = r.empirical >= r.bound - 3.0 * r.std_error;
  return r;
}

SequenceGenerator chain_log_increments(const MarkovChain& chain, double x0) {
  if (!(x0 > 0.0 && x0 <= chain.x_star())) throw DomainError("chain_log_increments: need 0 < x0 <= x_star");
  return [&chain, x0](Rng& rng, std::span<double> out) {
    double x = x0;
    for (double& v : out) {
      const double xi = chain.sample_xi(x, rng);
      v = std::log(xi);
      x *= xi;
      if (x > chain.x_star()) x = x0;
    }
  };
}

// ---- lower bounds ----------------------------------------------------------

LowerBoundConstants lower_bound_constants(const MarkovChain& chain) {
  const Model& m = chain.model();
  const Kernel& k = m.kernel();
  const double xs = chain.x_star();
  const double a = chain.alpha();
  const double r0 = m.R0();
  const bool u_case = m.demand().kind() == DemandClass::slowly_varying;
  if (u_case && xs > std::exp(-2.0) * (1.0 + 1e-12))
    throw DomainError("lower bound for slowly varying demand needs x_star <= e^-2");

  auto excess = [&](double x) {
    double ratio = (1.0 - x) * m.C(x) / (r0 * k.z_alpha(a, x));
    if (u_case) ratio /= 1.0 + 1.0 / (r0 * m.sigma(1.0 / x));
    return (ratio - 1.0) / x;
  };

  LowerBoundConstants c;
  const std::size_t probes = 2000;
  const double lo = 1e-10;
  double mu = 0.0;
  for (std::size_t i = 0; i <= probes; ++i) {
    const double x = lo * std::pow(xs / lo, static_cast<double>(i) / probes);
    const double q = excess(x);
    if (!std::isfinite(q)) throw DomainError("tail condition fails: non-finite ratio");
    mu = std::max(mu, q);
  }
  // A kernel tail heavier than s^{-alpha-2} makes the ratio blow up near 0.
  const double q10 = excess(1e-10), q9 = excess(1e-9), q8 = excess(1e-8);
  if (q10 > 1.5 * q9 && q9 > 1.5 * q8 && q8 > 0.0) throw DomainError("tail condition fails: kernel tail too heavy");
  c.mu = mu;

  const double zs = k.z_alpha(a, xs);
  c.e_star = k.integrate_r([a](double s) { return std::pow(s, a - 1.0); }, 1.0, 1.0 / xs, 1e-12) / zs;
  if (!(c.e_star < 1.0)) throw DomainError("E xi^-1 at x_star is not below 1");
  c.lambda_star = -std::log(c.e_star);
  c.g = 1.0 / (c.lambda_star * r0);
  c.Y_lower = k.integrate_r([a](double s) { return std::log(s) * std::pow(s, a); }, 1.0, 1.0 / xs, 1e-12) / zs;
  c.C = c.mu / (1.0 - c.e_star) + (1.0 + std::log(2.0 / c.Y_lower)) / (c.lambda_star * r0);

  const double d = chain.d();
  if (d > 0.0) {
    double kappa = 1.0;
    for (std::size_t i = 0; i <= 200; ++i) {
      const double x = 1e-8 * std::pow(xs / 1e-8, i / 200.0);
      const double num = k.integrate_r([&](double s) { return std::pow(s, a) * std::pow(std::max(0.0, 1.0 - s * x), d); },
                                       1.0, 1.0 / x, 1e-10);
      kappa = std::min(kappa, num / k.z_alpha(a, x));
    }
    c.kappa = kappa;
  }
  c.flat_factor = c.kappa * std::exp(-c.mu / (1.0 - c.e_star));
  return c;
}

double u_lower_bound(const LowerBoundConstants& k, double rho_min, double x) {
  if (!(x > 0.0 && x < 1.0)) throw DomainError("u_lower_bound: x must lie in (0, 1)");
  return rho_min * k.kappa * std::exp(-k.C) * std::pow(std::log(1.0 / x), -k.g);
}

FStarEstimate f_star_estimate(const MarkovChain& chain, std::size_t lattice) {
  const Model& m = chain.model();
  const double xs = chain.x_star();
  const double a = chain.alpha();
  const double r1 = m.R(1.0);
  FStarEstimate est;
  est.lattice = lattice;

  double probe = 0.0, slope = 0.0;
  for (std::size_t i = 0; i <= lattice; ++i) {
    const double gap = (1.0 - xs) * std::pow(1e-6, static_cast<double>(i) / lattice);
    const double x = 1.0 - gap;
    const double cx = m.C(x);
    for (std::size_t j = 0; j <= lattice; ++j) {
      const double y = x + gap * static_cast<double>(j) / lattice;
      const double ratio = y / x;
      double f = m.C1() / (x * cx) * m.R(ratio) / r1;
      if (a != 0.0) f *= std::pow(ratio, a);
      probe = std::max(probe, std::abs(1.0 - f) / gap);
    }
    slope = std::max(slope, std::abs(m.C1() - cx) / (m.C0() * gap));
  }
  est.probe_max = probe;
  est.closed_form_bound = (m.C1() / m.C0() + slope) / (xs * m.c_star());
  return est;
}

}  // namespace hierpareto
