#include "hierpareto/quadrature.hpp"

#include "hierpareto/errors.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <map>
#include <mutex>

namespace hierpareto::quad {

namespace {
constexpr unsigned kMaxDepth = 15;
}

Rule gauss_jacobi(int n, double a, double b) {
  if (n < 1) throw DomainError("gauss_jacobi: need at least one node");
  if (!(a > -1.0) || !(b > -1.0)) throw DomainError("gauss_jacobi: exponents must exceed -1");

  const double ab = a + b;
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    double alpha;
    if (k == 0) {
      alpha = (b - a) / (ab + 2.0);
    } else {
      const double s = 2.0 * k + ab;
      alpha = (b * b - a * a) / (s * (s + 2.0));
    }
    jac(k, k) = alpha;
    if (k + 1 < n) {
      const int m = k + 1;
      double beta;
      if (m == 1) {
        beta = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
      } else {
        const double s = 2.0 * m + ab;
        beta = 4.0 * m * (m + a) * (m + b) * (m + ab) / (s * s * (s + 1.0) * (s - 1.0));
      }
      jac(k, k + 1) = jac(k + 1, k) = std::sqrt(beta);
    }
  }

  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) +
                              std::lgamma(b + 1.0) - std::lgamma(ab + 2.0));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jac);
  Rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    rule.nodes[k] = eig.eigenvalues()(k);
    const double v = eig.eigenvectors()(0, k);
    rule.weights[k] = mu0 * v * v;
  }
  return rule;
}

const Rule& legendre_unit(int n) {
  static std::mutex mutex;
  static std::map<int, Rule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  Rule r = gauss_jacobi(n, 0.0, 0.0);
  for (int k = 0; k < n; ++k) {
    r.nodes[k] = 0.5 * (r.nodes[k] + 1.0);
    r.weights[k] *= 0.5;
  }
  return cache.emplace(n, std::move(r)).first->second;
}

Rule jacobi_right_unit(int n, double d) {
  // (1-u)^d on [0,1] with u = (t+1)/2: (1-u)^d = 2^-d (1-t)^d, du = dt/2.
  Rule r = gauss_jacobi(n, d, 0.0);
  const double scale = std::pow(2.0, -d - 1.0);
  for (int k = 0; k < n; ++k) {
    r.nodes[k] = 0.5 * (r.nodes[k] + 1.0);
    r.weights[k] *= scale;
  }
  return r;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol, double* error_estimate) {
  using boost::math::quadrature::gauss_kronrod;
  if (a == b) {
    if (error_estimate) *error_estimate = 0.0;
    return 0.0;
  }
  double err = 0.0;
  double value;
  if (std::isinf(b)) {
    // s = a + (1-t)/t maps (0, 1] onto [a, inf); the substitution t = 1/s of
    // the tail keeps power-law integrands smooth near t = 0.
    auto g = [&](double t) {
      if (t <= 0.0) return 0.0;
      const double s = a + (1.0 - t) / t;
      return f(s) / (t * t);
    };
    value = gauss_kronrod<double, 31>::integrate(g, 0.0, 1.0, kMaxDepth, rel_tol, &err);
  } else {
    value = gauss_kronrod<double, 31>::integrate(f, a, b, kMaxDepth, rel_tol, &err);
  }
  if (!std::isfinite(value)) throw DivergenceError("integrate: non-finite integral");
  if (error_estimate) *error_estimate = err;
  return value;
}

double composite(const std::function<double(double)>& f, double a, double b,
                 int pieces, int order) {
  const Rule& rule = legendre_unit(order);
  const double h = (b - a) / pieces;
  double sum = 0.0;
  for (int p = 0; p < pieces; ++p) {
    const double lo = a + p * h;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) sum += rule.weights[k] * f(lo + h * rule.nodes[k]);
  }
  return sum * h;
}

}  // namespace hierpareto::quad
