#include "homotomo/frames.hpp"

#include "homotomo/estimators.hpp"
#include "homotomo/special.hpp"

#include <cmath>

namespace homotomo {
namespace {

// a^dag^k a^l on the truncated space: <k+n|.|l+n> = sqrt((k+n)!(l+n)!)/n!.
Eigen::MatrixXcd normal_monomial(int k, int l, int dim) {
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 0; k + n < dim && l + n < dim; ++n)
    M(k + n, l + n) = std::exp(0.5 * (log_factorial(k + n) + log_factorial(l + n)) - log_factorial(n));
  return M;
}

TwoModeOperator exp_nilpotent(const TwoModeOperator& A) {
  TwoModeOperator out = TwoModeOperator::Identity(A.rows(), A.cols());
  TwoModeOperator term = out;
  for (int k = 1; k < A.rows(); ++k) {
    term = term * A / static_cast<double>(k);
    if (term.cwiseAbs().maxCoeff() == 0.0) break;
    out += term;
  }
  return out;
}

}  // namespace

TwoModeOperator moments_frame_operator(int dim) {
  if (dim < 1 || dim > 12) throw std::invalid_argument("moments frame: dim must lie in [1, 12]");
  TwoModeOperator F = TwoModeOperator::Zero(dim * dim, dim * dim);
  for (int k = 0; k < dim; ++k)
    for (int l = 0; l < dim; ++l) {
      const Eigen::VectorXcd v = vectorize(normal_monomial(k, l, dim));
      F += v * v.adjoint();
    }
  return F;
}

TwoModeOperator moments_frame_closed(int dim) {
  if (dim < 1 || dim > 12) throw std::invalid_argument("moments frame: dim must lie in [1, 12]");
  const Eigen::MatrixXcd ad = ladder(dim).adjoint();
  const TwoModeOperator U = exp_nilpotent(kron(ad, ad));
  Eigen::VectorXcd D(dim * dim);
  for (int n = 0; n < dim; ++n)
    for (int m = 0; m < dim; ++m) D(n * dim + m) = std::exp(log_factorial(n) + log_factorial(m));
  return U * D.asDiagonal() * U.adjoint();
}

TwoModeOperator moments_frame_inverse(int dim) {
  if (dim < 1 || dim > 12) throw std::invalid_argument("moments frame: dim must lie in [1, 12]");
  const Eigen::MatrixXcd ad = ladder(dim).adjoint();
  const TwoModeOperator Uinv = exp_nilpotent(-kron(ad, ad));
  Eigen::VectorXcd D(dim * dim);
  for (int n = 0; n < dim; ++n)
    for (int m = 0; m < dim; ++m) D(n * dim + m) = std::exp(-log_factorial(n) - log_factorial(m));
  return Uinv.adjoint() * D.asDiagonal() * Uinv;
}

Eigen::MatrixXcd dual_moment(int k, int l, int dim) {
  if (k < 0 || l < 0 || k >= dim || l >= dim) throw std::invalid_argument("dual_moment: indices outside the truncated space");
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(dim, dim);
  for (int t = 0; t <= std::min(k, l); ++t)
    g(k - t, l - t) = (t % 2 ? -1.0 : 1.0) * std::exp(-log_factorial(t) - 0.5 * (log_factorial(k - t) + log_factorial(l - t)));
  return g;
}

double moments_biorthogonality_error(int max_index) {
  const int dim = 2 * max_index + 2;
  double worst = 0.0;
  for (int kp = 0; kp <= max_index; ++kp)
    for (int lp = 0; lp <= max_index; ++lp) {
      const Eigen::MatrixXcd g = dual_moment(kp, lp, dim);
      for (int k = 0; k <= max_index; ++k)
        for (int l = 0; l <= max_index; ++l) {
          const cplx tr = (g.adjoint() * normal_monomial(k, l, dim)).trace();
          worst = std::max(worst, std::abs(tr - cplx(k == kp && l == lp ? 1.0 : 0.0)));
        }
    }
  return worst;
}

FrameCheckReport moments_frame_check(int dim) {
  FrameCheckReport rep;
  rep.name = "moments";
  const TwoModeOperator F = moments_frame_operator(dim);
  const TwoModeOperator Fc = moments_frame_closed(dim);
  double entry_rel = 0.0;
  for (Eigen::Index i = 0; i < F.rows(); ++i)
    for (Eigen::Index j = 0; j < F.cols(); ++j)
      entry_rel = std::max(entry_rel, std::abs(F(i, j) - Fc(i, j)) / std::max(1.0, std::abs(F(i, j))));
  rep.metrics.push_back({"dyad_vs_closed_entry_rel", entry_rel});
  rep.metrics.push_back({"vacuum_entry_residual", std::abs(F(0, 0) - cplx(1.0))});
  rep.metrics.push_back({"hermiticity", (F - F.adjoint()).cwiseAbs().maxCoeff() / F.cwiseAbs().maxCoeff()});

  // F = S M S and F^{-1} = S^{-1} N S^{-1} with S = diag sqrt(n! m!); the product is formed
  // as (M N) scaled by S_i / S_j from log factorials.
  const int N2 = dim * dim;
  Eigen::VectorXd logS(N2);
  for (int n = 0; n < dim; ++n)
    for (int m = 0; m < dim; ++m) logS(n * dim + m) = 0.5 * (log_factorial(n) + log_factorial(m));
  const TwoModeOperator Fi = moments_frame_inverse(dim);
  Eigen::MatrixXcd M(N2, N2), Nm(N2, N2);
  for (int i = 0; i < N2; ++i)
    for (int j = 0; j < N2; ++j) {
      M(i, j) = F(i, j) * std::exp(-logS(i) - logS(j));
      Nm(i, j) = Fi(i, j) * std::exp(logS(i) + logS(j));
    }
  const Eigen::MatrixXcd MN = M * Nm;
  const int c = dim - 2;
  double inv_err = 0.0;
  for (int n = 0; n < c; ++n)
    for (int m = 0; m < c; ++m)
      for (int np = 0; np < c; ++np)
        for (int mp = 0; mp < c; ++mp) {
          const int i = n * dim + m, j = np * dim + mp;
          const cplx v = MN(i, j) * std::exp(logS(i) - logS(j));
          inv_err = std::max(inv_err, std::abs(v - cplx(i == j ? 1.0 : 0.0)));
        }
  rep.metrics.push_back({"F_Finv_identity_abs", inv_err});

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M, Eigen::EigenvaluesOnly);
  rep.metrics.push_back({"min_eigenvalue_scaled", es.eigenvalues().minCoeff()});

  // sum_{k,l} |a^dag^k a^l>><<g_{k,l}| = I.
  TwoModeOperator R = TwoModeOperator::Zero(N2, N2);
  for (int k = 0; k < dim; ++k)
    for (int l = 0; l < dim; ++l) R += vectorize(normal_monomial(k, l, dim)) * vectorize(dual_moment(k, l, dim)).adjoint();
  const double duality = (R - TwoModeOperator::Identity(N2, N2)).cwiseAbs().maxCoeff();
  rep.metrics.push_back({"monomial_dual_resolution", duality});

  const double bio = moments_biorthogonality_error(6);
  rep.metrics.push_back({"biorthogonality_max_error", bio});

  // Vacuum pattern function of the moments dual, 200 terms of the series at x = 0.
  const double series = std::abs(KernelEvaluator(EstimatorKernel::moment_dual(0, 0, 200))(0.0, 0.0) - cplx(2.0));
  rep.metrics.push_back({"vacuum_dual_series_x0_error", series});

  rep.passed = entry_rel < 1e-12 && std::abs(F(0, 0) - cplx(1.0)) < 1e-14 && inv_err < 1e-8 &&
               es.eigenvalues().minCoeff() > 0 && duality < 1e-8 && bio < 1e-12 && series < 1e-9;
  rep.note = "closed form ordered as e^{a^dag b^dag} (a^dag a! (x) b^dag b!) e^{ab}";
  return rep;
}

}  // namespace homotomo
