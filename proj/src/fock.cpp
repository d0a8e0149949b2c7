#include "homotomo/fock.hpp"

#include "homotomo/errors.hpp"
#include "homotomo/special.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <string>

namespace homotomo {

void validate(const DensityMatrix& state, const StateTolerance& tol) {
  const auto& rho = state.rho;
  if (rho.rows() < 1 || rho.rows() != rho.cols()) throw NumericError("density matrix must be square and nonempty");
  if (!rho.allFinite()) throw NumericError("density matrix has non-finite entries");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol.hermiticity) throw NumericError("density matrix not Hermitian");
  if (std::abs(rho.trace() - cplx(1.0)) > tol.trace) throw NumericError("density matrix trace differs from 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < tol.min_eigenvalue) throw NumericError("density matrix has a negative eigenvalue");
  if (state.norm_deficit > tol.max_deficit)
    throw NumericError("truncation deficit " + std::to_string(state.norm_deficit) + " exceeds tolerance");
}

DensityMatrix state_fock(int n, int dim) {
  if (n < 0 || n >= dim) throw NumericError("Fock state |" + std::to_string(n) + "> outside cutoff");
  DensityMatrix s{Eigen::MatrixXcd::Zero(dim, dim), 0.0};
  s.rho(n, n) = 1.0;
  return s;
}

DensityMatrix state_coherent(cplx alpha, int dim, const StateTolerance& tol) {
  if (dim < 1) throw NumericError("dimension must be positive");
  const double r2 = std::norm(alpha);
  Eigen::VectorXcd c(dim);
  c(0) = std::exp(-0.5 * r2);
  for (int n = 1; n < dim; ++n) c(n) = c(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  // Tail mass sum_{n >= dim} e^{-r2} r2^n / n!
  double tail = 0.0;
  if (r2 > 0.0) {
    double term = std::exp(-r2 + dim * std::log(r2) - log_factorial(dim));
    for (int n = dim; term > 1e-300 && n < dim + 10000; ++n) {
      tail += term;
      term *= r2 / (n + 1);
      if (n > r2 && term < 1e-20 * tail) break;
    }
  }
  DensityMatrix s{c * c.adjoint(), tail};
  s.rho /= s.rho.trace().real();
  if (tail > tol.max_deficit)
    throw NumericError("cutoff " + std::to_string(dim) + " too small for coherent amplitude (deficit " +
                       std::to_string(tail) + ")");
  return s;
}

DensityMatrix state_thermal(double nbar, int dim, const StateTolerance& tol) {
  if (nbar < 0.0) throw NumericError("thermal occupation must be nonnegative");
  const double r = nbar / (nbar + 1.0);
  DensityMatrix s{Eigen::MatrixXcd::Zero(dim, dim), std::pow(r, dim)};
  for (int n = 0; n < dim; ++n) s.rho(n, n) = std::pow(r, n) / (nbar + 1.0);
  s.rho /= s.rho.trace().real();
  if (s.norm_deficit > tol.max_deficit)
    throw NumericError("cutoff " + std::to_string(dim) + " too small for thermal state (deficit " +
                       std::to_string(s.norm_deficit) + ")");
  return s;
}

Eigen::VectorXd quadrature_wavefunctions_at(int nmax, double x) { return quadrature_wavefunctions(nmax, x); }

double quadrature_wavefunction(int n, double x) { return quadrature_wavefunctions(n, x)(n); }

Eigen::VectorXcd pdf_harmonics(const Eigen::MatrixXcd& rho, double x) {
  const int dim = static_cast<int>(rho.rows());
  const Eigen::VectorXd psi = quadrature_wavefunctions(dim - 1, x);
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(dim);
  for (int d = 0; d < dim; ++d)
    for (int n = 0; n + d < dim; ++n) c(d) += rho(n, n + d) * (psi(n) * psi(n + d));
  return c;
}

double quadrature_pdf(const Eigen::MatrixXcd& rho, double phi, double x) {
  const Eigen::VectorXcd c = pdf_harmonics(rho, x);
  double p = c(0).real();
  for (int d = 1; d < c.size(); ++d) p += 2.0 * (c(d) * std::polar(1.0, d * phi)).real();
  return p;
}

Eigen::MatrixXcd displacement(cplx alpha, int dim) {
  Eigen::MatrixXcd D(dim, dim);
  const double r2 = std::norm(alpha);
  const double g = std::exp(-0.5 * r2);
  for (int m = 0; m < dim; ++m) {
    for (int n = 0; n < dim; ++n) {
      // <m|D(alpha)|n>
      const int lo = std::min(m, n), d = std::abs(m - n);
      const cplx z = m >= n ? alpha : -std::conj(alpha);
      const double scale = std::exp(0.5 * (log_factorial(lo) - log_factorial(lo + d)));
      cplx zd = 1.0;
      for (int i = 0; i < d; ++i) zd *= z;
      D(m, n) = scale * zd * g * laguerre(lo, d, r2);
    }
  }
  return D;
}

Eigen::MatrixXcd displacement_expm(cplx alpha, int dim) {
  const Eigen::MatrixXcd a = ladder(dim);
  const Eigen::MatrixXcd gen = alpha * a.adjoint() - std::conj(alpha) * a;
  return gen.exp();
}

cplx expectation(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& op) {
  if (rho.rows() != op.rows() || rho.cols() != op.cols())
    throw std::invalid_argument("expectation: dimension mismatch");
  return (rho * op).trace();
}

Eigen::MatrixXcd quadrature_operator(int dim, double phi) {
  const Eigen::MatrixXcd a = ladder(dim);
  return 0.5 * (std::polar(1.0, phi) * a.adjoint() + std::polar(1.0, -phi) * a);
}

}  // namespace homotomo
