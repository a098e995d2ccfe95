#pragma once

#include <functional>
#include <vector>

namespace hierpareto::quad {

// Fixed rule on a reference interval: nodes and weights.
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Jacobi rule on [-1, 1] for the weight (1-t)^a (1+t)^b, a, b > -1,
// computed by Golub-Welsch. a = b = 0 gives Gauss-Legendre.
Rule gauss_jacobi(int n, double a, double b);

// Gauss-Legendre rule mapped to [0, 1].
const Rule& legendre_unit(int n);

// Rule on [0, 1] exact for (1-u)^d * poly(u) of degree 2n-1; the weight
// (1-u)^d is built into the returned weights.
Rule jacobi_right_unit(int n, double d);

// Adaptive Gauss-Kronrod integration over [a, b]; b may be +infinity, in
// which case the tail is mapped onto a finite interval. Throws
// DivergenceError if the estimate is not finite.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-12, double* error_estimate = nullptr);

// Composite Gauss-Legendre over [a, b] split into `pieces` equal parts.
double composite(const std::function<double(double)>& f, double a, double b,
                 int pieces, int order = 16);

}  // namespace hierpareto::quad
