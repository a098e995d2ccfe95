#include "hierpareto/density.hpp"

#include "hierpareto/errors.hpp"
#include "hierpareto/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace hierpareto {

namespace {
constexpr int kOrder = 16;
}

NetDensity::NetDensity(Model model, RhoSolution sol) : model_(std::move(model)), sol_(std::move(sol)) {
  if (!sol_.converged) throw ConvergenceError("density reconstruction needs a converged rho");
  const auto& x = sol_.grid.nodes;
  const std::size_t n = x.size();
  cum_.assign(n, 0.0);

  // Below x_min: x = x_min e^{-t}.
  const double x0 = x.front();
  cum_[0] = quad::integrate([&](double t) {
    const double xx = x0 * std::exp(-t);
    return xx == 0.0 ? 0.0 : weight(xx) * xx;
  }, 0.0, kInf, 1e-12);

  const auto& gl = quad::legendre_unit(kOrder);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    if (j + 2 == n && sol_.d != 0.0) {
      cum_[j + 1] = mass_below(1.0);
      break;
    }
    const double a = x[j], h = x[j + 1] - x[j];
    double s = 0.0;
    for (std::size_t k = 0; k < gl.nodes.size(); ++k) s += gl.weights[k] * weight(a + h * gl.nodes[k]);
    cum_[j + 1] = cum_[j] + h * s;
  }
  n0_ = 1.0 / cum_.back();
}

double NetDensity::weight(double x) const {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double rho = sol_.grid.interpolate(sol_.rho, x);
  double w = rho / model_.sigma(1.0 / x);
  if (sol_.alpha != 0.0) w *= std::pow(x, sol_.alpha);
  if (sol_.d != 0.0) w *= std::pow(1.0 - x, sol_.d);
  return w;
}

double NetDensity::mass_below(double xq) const {
  const auto& x = sol_.grid.nodes;
  if (xq <= 0.0) return 0.0;
  if (xq <= x.front()) {
    return quad::integrate([&](double t) {
      const double xx = xq * std::exp(-t);
      return xx == 0.0 ? 0.0 : weight(xx) * xx;
    }, 0.0, kInf, 1e-12);
  }
  const std::size_t n = x.size();
  xq = std::min(xq, 1.0);
  const std::size_t j = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), xq) - x.begin()) - 1;
  const std::size_t jj = std::min(j, n - 2);

  if (jj == n - 2 && sol_.d != 0.0) {
    // (1-z)^d is integrated exactly on [x_{n-2}, 1] and [xq, 1].
    const auto gj = quad::jacobi_right_unit(kOrder, sol_.d);
    auto tail = [&](double lo) {
      const double h = 1.0 - lo;
      double s = 0.0;
      for (std::size_t k = 0; k < gj.nodes.size(); ++k) {
        const double z = lo + h * gj.nodes[k];
        double w = sol_.grid.interpolate(sol_.rho, z) / model_.sigma(1.0 / z);
        if (sol_.alpha != 0.0) w *= std::pow(z, sol_.alpha);
        s += gj.weights[k] * w;
      }
      return std::pow(h, sol_.d + 1.0) * s;
    };
    return cum_[n - 2] + tail(x[n - 2]) - (xq < 1.0 ? tail(xq) : 0.0);
  }
  if (xq == x[jj]) return cum_[jj];
  const auto& gl = quad::legendre_unit(kOrder);
  const double a = x[jj], h = xq - a;
  double s = 0.0;
  for (std::size_t k = 0; k < gl.nodes.size(); ++k) s += gl.weights[k] * weight(a + h * gl.nodes[k]);
  return cum_[jj] + h * s;
}

double NetDensity::operator()(double s) const {
  if (s < 1.0) return 0.0;
  if (s == 1.0) return sol_.d < 0.0 ? kInf : (sol_.d > 0.0 ? 0.0 : n0_ / model_.sigma(1.0));
  const double x = 1.0 / s;
  return n0_ * x * x * weight(x);
}

double NetDensity::ccdf(double s) const {
  if (s <= 1.0) return 1.0;
  return std::clamp(n0_ * mass_below(1.0 / s), 0.0, 1.0);
}

double gross_map(const Model& model, double s) {
  if (!(s >= 1.0)) throw DomainError("gross_map: s must be >= 1");
  return s * (1.0 + model.sigma(s) * model.R0());
}

double invert_gross(const Model& model, double g) {
  const double g1 = gross_map(model, 1.0);
  if (!(g >= g1)) throw DomainError("invert_gross: g is below the minimal gross income");
  const double r0 = model.R0();
  if (model.demand().kind() == DemandClass::linear) {
    // g = s + R0 s^2.
    return 2.0 * g / (1.0 + std::sqrt(1.0 + 4.0 * r0 * g));
  }
  // g(s) >= s, so the root lies in [1, g].
  double lo = 1.0, hi = g;
  for (int k = 0; k < 200 && hi - lo > 1e-15 * hi; ++k) {
    const double mid = 0.5 * (lo + hi);
    (gross_map(model, mid) < g ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double GrossDensity::operator()(double g) const {
  const Model& m = net_.model();
  if (g < gross_map(m, 1.0)) return 0.0;
  const double s = invert_gross(m, g);
  const double slope = 1.0 + m.R0() * (m.sigma(s) + s * m.demand().derivative(s));
  return net_(s) / slope;
}

double GrossDensity::ccdf(double g) const {
  const Model& m = net_.model();
  if (g <= gross_map(m, 1.0)) return 1.0;
  return net_.ccdf(invert_gross(m, g));
}

namespace {

std::vector<double> log_points(double lo, double hi, std::size_t n) {
  if (n < 2 || !(hi > lo)) throw DomainError("table needs at least two points on a nonempty range");
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = lo * std::pow(hi / lo, static_cast<double>(k) / (n - 1));
  v.back() = hi;
  return v;
}

}  // namespace

DensityTable net_table(const NetDensity& net, double upper, std::size_t points) {
  DensityTable t;
  t.at = log_points(1.0, upper, points);
  for (double s : t.at) {
    t.density.push_back(net(s));
    t.ccdf.push_back(net.ccdf(s));
  }
  return t;
}

DensityTable gross_table(const NetDensity& net, double upper, std::size_t points) {
  GrossDensity gross(net);
  DensityTable t;
  t.at = log_points(gross_map(net.model(), 1.0), upper, points);
  for (double g : t.at) {
    t.density.push_back(gross(g));
    t.ccdf.push_back(gross.ccdf(g));
  }
  return t;
}

}  // namespace hierpareto
