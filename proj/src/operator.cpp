#include "hierpareto/operator.hpp"

#include "hierpareto/errors.hpp"
#include "hierpareto/exponents.hpp"
#include "hierpareto/quadrature.hpp"

#include <cmath>

namespace hierpareto {

BalanceOperator::BalanceOperator(Model model, double alpha, double d, int order)
    : model_(std::move(model)), alpha_(alpha), d_(d) {
  if (!(d > -1.0)) throw DomainError("boundary exponent d must exceed -1");
  if (!(alpha >= 0.0)) throw DomainError("alpha must be nonnegative");
  boundary_weight_ = model_.R(1.0) / ((d_ + 1.0) * model_.C1());
  const auto& gl = quad::legendre_unit(order);
  gl_nodes_ = gl.nodes;
  gl_weights_ = gl.weights;
  if (d_ != 0.0) {
    const auto gj = quad::jacobi_right_unit(order, d_);
    gj_nodes_ = gj.nodes;
    gj_weights_ = gj.weights;
  }
}

BalanceOperator::BalanceOperator(Model model)
    : BalanceOperator(model, compute_alpha(model), compute_d(model)) {}

double BalanceOperator::kernel(double x, double z) const {
  if (!(x > 0.0 && x < 1.0)) throw DomainError("kernel: x must lie in (0, 1)");
  if (z <= x || z >= 1.0) return 0.0;
  const double y = z / x;
  double k = model_.R(y);
  if (k == 0.0) return 0.0;
  if (alpha_ != 0.0) k *= std::pow(y, alpha_);
  if (d_ != 0.0) k *= std::pow((1.0 - z) / (1.0 - x), d_);
  return k / (x * (1.0 - x) * model_.C(x));
}

void BalanceOperator::row(const Grid& grid, std::size_t i, std::span<double> out) const {
  const auto& z = grid.nodes;
  const std::size_t n = z.size();
  if (out.size() != n) throw DomainError("row: output size does not match the grid");
  if (i >= n) throw DomainError("row: index out of range");
  std::fill(out.begin(), out.end(), 0.0);
  if (i == n - 1) {
    out[i] = boundary_weight_;
    return;
  }

  const double x = z[i];
  const bool small = x <= model_.x_star();
  const double pref = 1.0 / ((1.0 - x) * model_.C(x));
  const bool monotone = model_.kernel().family() == KernelFamily::exponential;

  for (std::size_t j = i; j + 1 < n; ++j) {
    const double a = z[j];
    const double b = z[j + 1];
    if (monotone && model_.R(a / x) == 0.0) break;
    const bool last = (j + 2 == n) && d_ != 0.0;
    const auto& un = last ? gj_nodes_ : gl_nodes_;
    const auto& uw = last ? gj_weights_ : gl_weights_;
    const double h = b - a;
    // Scale of the singular factor on the last interval: (1-z)^d = h^d (1-u)^d.
    const double sing = last ? std::pow(h / (1.0 - x), d_) : 1.0;
    double wl = 0.0, wr = 0.0;
    for (std::size_t k = 0; k < un.size(); ++k) {
      const double u = un[k];
      double y, zz;
      if (small) {
        // y = z/x substitution keeps the kernel argument well conditioned.
        const double ya = a / x, yb = b / x;
        y = ya + (yb - ya) * u;
        zz = x * y;
      } else {
        zz = a + h * u;
        y = zz / x;
      }
      double f = model_.R(y);
      if (f == 0.0) continue;
      if (alpha_ != 0.0) f *= std::pow(y, alpha_);
      if (d_ != 0.0) f *= last ? sing : std::pow((1.0 - zz) / (1.0 - x), d_);
      f *= uw[k];
      wl += f * (1.0 - u);
      wr += f * u;
    }
    const double scale = pref * h / x;
    out[j] += scale * wl;
    out[j + 1] += scale * wr;
  }
}

Eigen::MatrixXd assemble_serial(const BalanceOperator& op, const Grid& grid) {
  const std::size_t n = grid.size();
  Eigen::MatrixXd m(n, n);
  std::vector<double> buf(n);
  for (std::size_t i = 0; i < n; ++i) {
    op.row(grid, i, buf);
    for (std::size_t j = 0; j < n; ++j) m(i, j) = buf[j];
  }
  return m;
}

Eigen::MatrixXd assemble_parallel(const BalanceOperator& op, const Grid& grid) {
  const long n = static_cast<long>(grid.size());
  Eigen::MatrixXd m(n, n);
#pragma omp parallel
  {
    std::vector<double> buf(n);
#pragma omp for schedule(dynamic, 4)
    for (long i = 0; i < n; ++i) {
      op.row(grid, static_cast<std::size_t>(i), buf);
      for (long j = 0; j < n; ++j) m(i, j) = buf[j];
    }
  }
  return m;
}

namespace {

void check_input(const Grid& grid, std::span<const double> rho) {
  if (rho.size() != grid.size()) throw DomainError("apply_A: value count does not match the grid");
  for (double v : rho)
    if (!(v >= 0.0)) throw DomainError("apply_A: rho must be nonnegative");
}

double dot_row(const BalanceOperator& op, const Grid& grid, std::size_t i,
               std::span<const double> rho, std::vector<double>& buf) {
  op.row(grid, i, buf);
  double s = 0.0;
  for (std::size_t j = i; j < buf.size(); ++j) s += buf[j] * rho[j];
  return s;
}

}  // namespace

std::vector<double> apply_A(const BalanceOperator& op, const Grid& grid, std::span<const double> rho) {
  check_input(grid, rho);
  std::vector<double> out(grid.size()), buf(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = dot_row(op, grid, i, rho, buf);
  return out;
}

std::vector<double> apply_A_parallel(const BalanceOperator& op, const Grid& grid,
                                     std::span<const double> rho) {
  check_input(grid, rho);
  const long n = static_cast<long>(grid.size());
  std::vector<double> out(n);
#pragma omp parallel
  {
    std::vector<double> buf(n);
#pragma omp for schedule(dynamic, 4)
    for (long i = 0; i < n; ++i) out[i] = dot_row(op, grid, static_cast<std::size_t>(i), rho, buf);
  }
  return out;
}

}  // namespace hierpareto
