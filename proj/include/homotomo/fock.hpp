#pragma once

// Truncated Fock space: ladder operators, states, quadrature wavefunctions and
// homodyne probability densities. Convention: X_phi = (a^dag e^{i phi} + a e^{-i phi})/2.

#include <Eigen/Dense>

#include <complex>

namespace homotomo {

using cplx = std::complex<double>;

template <typename Scalar = double>
using FockMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

/// Annihilation operator with <n-1|a|n> = sqrt(n).
template <typename Scalar = double>
FockMatrix<Scalar> ladder(int dim) {
  FockMatrix<Scalar> a = FockMatrix<Scalar>::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<Scalar>(n));
  return a;
}

struct DensityMatrix {
  Eigen::MatrixXcd rho;
  double norm_deficit = 0.0;  // probability mass lost to truncation before renormalizing

  int dim() const { return static_cast<int>(rho.rows()); }
};

struct StateTolerance {
  double hermiticity = 1e-12;
  double trace = 1e-9;
  double min_eigenvalue = -1e-10;
  double max_deficit = 1e-8;
};

/// Throws NumericError if an invariant is violated.
void validate(const DensityMatrix& state, const StateTolerance& tol = {});

DensityMatrix state_fock(int n, int dim);
DensityMatrix state_coherent(cplx alpha, int dim, const StateTolerance& tol = {});
DensityMatrix state_thermal(double nbar, int dim, const StateTolerance& tol = {});

/// <n|x>_0 for n = 0..nmax.
Eigen::VectorXd quadrature_wavefunctions_at(int nmax, double x);
double quadrature_wavefunction(int n, double x);

/// Coefficients c_d(x) = sum_n rho_{n,n+d} psi_n(x) psi_{n+d}(x), d = 0..dim-1, so that
/// p(x|phi) = c_0 + 2 Re sum_{d>0} c_d e^{i d phi}.
Eigen::VectorXcd pdf_harmonics(const Eigen::MatrixXcd& rho, double x);
double quadrature_pdf(const Eigen::MatrixXcd& rho, double phi, double x);

/// Closed-form matrix elements via associated Laguerre polynomials.
Eigen::MatrixXcd displacement(cplx alpha, int dim);
/// exp(alpha a^dag - alpha^* a) of the truncated generator (cross-check only).
Eigen::MatrixXcd displacement_expm(cplx alpha, int dim);

/// Tr[rho O]; throws std::invalid_argument on dimension mismatch.
cplx expectation(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& op);

/// X_phi on the truncated space.
Eigen::MatrixXcd quadrature_operator(int dim, double phi);

}  // namespace homotomo
