#include "hierpareto/spectral.hpp"

#include "hierpareto/errors.hpp"
#include "hierpareto/operator.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace hierpareto {

Eigen::MatrixXd discretize_A(const Model& model, std::size_t n, double x_min, double grading) {
  if (n < 2) throw DomainError("discretize_A: need at least two nodes");
  const BalanceOperator op(model);
  return assemble_parallel(op, build_grid(n, x_min, grading));
}

Eigen::MatrixXd discretize_A_fourier(const Model& model, std::size_t n, std::size_t fine_nodes) {
  if (n < 1) throw DomainError("discretize_A_fourier: need at least one basis function");
  const BalanceOperator op(model);
  const Grid g = build_grid(fine_nodes, 1e-3, 1.0);
  const Eigen::MatrixXd a = assemble_parallel(op, g);
  const long m = static_cast<long>(g.size());
  const long k = static_cast<long>(n);

  Eigen::MatrixXd phi(m, k);
  for (long i = 0; i < m; ++i) {
    const double x = g.nodes[i];
    phi(i, 0) = 1.0;
    for (long j = 1; j < k; ++j) {
      const double freq = 2.0 * std::numbers::pi * static_cast<double>((j + 1) / 2);
      phi(i, j) = std::numbers::sqrt2 * ((j % 2) ? std::cos(freq * x) : std::sin(freq * x));
    }
  }
  Eigen::VectorXd w(m);
  for (long i = 0; i < m; ++i) w[i] = g.weights[i];
  return phi.transpose() * w.asDiagonal() * (a * phi);
}

SpectrumReport spectrum(const Eigen::MatrixXd& a, double cluster_tol) {
  if (a.rows() != a.cols() || a.rows() == 0) throw DomainError("spectrum: need a nonempty square matrix");
  const long n = a.rows();
  const Eigen::MatrixXd b = Eigen::MatrixXd::Identity(n, n) - a;
  Eigen::EigenSolver<Eigen::MatrixXd> es(b, false);
  if (es.info() != Eigen::Success) throw ConvergenceError("spectrum: eigensolver did not converge");

  SpectrumReport rep;
  rep.n = static_cast<std::size_t>(n);
  const auto ev = es.eigenvalues();
  rep.eigenvalues.assign(ev.data(), ev.data() + n);
  rep.min_modulus_eigenvalue = rep.eigenvalues.front();
  for (const auto& z : rep.eigenvalues)
    if (std::abs(z) < std::abs(rep.min_modulus_eigenvalue)) rep.min_modulus_eigenvalue = z;
  for (const auto& z : rep.eigenvalues)
    if (std::abs(z - rep.min_modulus_eigenvalue) <= cluster_tol) ++rep.multiplicity_estimate;
  return rep;
}

std::size_t real_eigenvalues_outside_unit_disk(const SpectrumReport& rep, double imag_tol) {
  std::size_t bad = 0;
  for (const auto& mu : rep.eigenvalues)
    if (std::abs(mu) > 1.0 && std::abs(mu.imag()) <= imag_tol) ++bad;
  return bad;
}

std::vector<double> leading_eigenvector(const Eigen::MatrixXd& a) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(a, true);
  if (es.info() != Eigen::Success) throw ConvergenceError("leading_eigenvector: eigensolver did not converge");
  const auto ev = es.eigenvalues();
  long best = 0;
  for (long i = 1; i < ev.size(); ++i)
    if (std::abs(ev[i] - 1.0) < std::abs(ev[best] - 1.0)) best = i;
  const Eigen::VectorXcd v = es.eigenvectors().col(best);
  long big = 0;
  for (long i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[big])) big = i;
  const std::complex<double> scale = v[big];
  std::vector<double> out(v.size());
  for (long i = 0; i < v.size(); ++i) out[i] = (v[i] / scale).real();
  return out;
}

}  // namespace hierpareto
