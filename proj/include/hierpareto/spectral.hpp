#pragma once

#include "hierpareto/grid.hpp"
#include "hierpareto/model.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace hierpareto {

struct SpectrumReport {
  std::size_t n = 0;
  std::vector<std::complex<double>> eigenvalues;  // of I - A_n
  std::complex<double> min_modulus_eigenvalue;
  std::size_t multiplicity_estimate = 0;  // eigenvalues within 1e-6 of the one above
};

// Collocation matrix of A on build_grid(n, x_min, grading).
Eigen::MatrixXd discretize_A(const Model& model, std::size_t n, double x_min = 1e-4, double grading = 2.0);

// Galerkin matrix of A in the orthonormal trigonometric basis
// {1, sqrt2 cos 2 pi k x, sqrt2 sin 2 pi k x} of L2(0,1), n functions,
// computed by projecting a fine collocation matrix.
Eigen::MatrixXd discretize_A_fourier(const Model& model, std::size_t n, std::size_t fine_nodes = 3000);

// Spectrum of I - a.
SpectrumReport spectrum(const Eigen::MatrixXd& a, double cluster_tol = 1e-6);

// Eigenvalues lam of A_n (1 - mu for mu in the report) with |1 - lam| > 1 and
// |Im lam| <= imag_tol.
std::size_t real_eigenvalues_outside_unit_disk(const SpectrumReport& rep, double imag_tol = 1e-8);

// Eigenvector of a for the eigenvalue nearest 1, scaled so its largest
// entry is +1 (real part).
std::vector<double> leading_eigenvector(const Eigen::MatrixXd& a);

}  // namespace hierpareto
