#include "homotomo/frames.hpp"

#include "homotomo/errors.hpp"
#include "homotomo/estimators.hpp"
#include "homotomo/quadrature.hpp"
#include "homotomo/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

namespace homotomo {
namespace {

constexpr double kPi = std::numbers::pi;

double operator_norm(const Eigen::MatrixXcd& A) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
  return svd.singularValues()(0);
}

// Regularized swap at a single eps: 2 int dr r e^{-4 eps r^2} (-1)^{n-n'} R_nn'(r) R_mm'(r), n - n' = m' - m.
TwoModeOperator swap_at(int dim, double eps) {
  const double R = std::sqrt(2.0 * dim) + 8.0;
  const QuadratureRule rule = composite_gauss_legendre(0.0, R, static_cast<int>(std::ceil(R / 0.25)), 10);
  TwoModeOperator E = TwoModeOperator::Zero(dim * dim, dim * dim);
  for (Eigen::Index q = 0; q < rule.size(); ++q) {
    const double r = rule.nodes(q);
    const double w = 2.0 * rule.weights(q) * r * std::exp(-4.0 * eps * r * r);
    const Eigen::MatrixXd D = displacement(cplx(r, 0.0), dim).real();
    for (int n = 0; n < dim; ++n)
      for (int np = 0; np < dim; ++np) {
        const double s = (n - np) % 2 ? -w : w;
        for (int m = 0; m < dim; ++m) {
          const int mp = m + n - np;
          if (mp < 0 || mp >= dim) continue;
          E(n * dim + m, np * dim + mp) += s * D(n, np) * D(m, mp);
        }
      }
  }
  return E;
}

// c(j * dim + l, m) = int dx psi_j psi_l psi_m.
Eigen::MatrixXd triple_overlaps(int dim, int aux) {
  const double L = std::sqrt(static_cast<double>(std::max(dim, aux))) + 6.0;
  const QuadratureRule xs = composite_gauss_legendre(-L, L, 200, 8);
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(dim * dim, aux);
  for (Eigen::Index q = 0; q < xs.size(); ++q) {
    const Eigen::VectorXd psi = quadrature_wavefunctions(std::max(dim, aux) - 1, xs.nodes(q));
    for (int j = 0; j < dim; ++j)
      for (int l = 0; l < dim; ++l) {
        const double wjl = xs.weights(q) * psi(j) * psi(l);
        for (int m = 0; m < aux; ++m) C(j * dim + l, m) += wjl * psi(m);
      }
  }
  return C;
}

}  // namespace

TwoModeOperator swap_from_quadratures(int dim) {
  if (dim < 1 || dim > 10) throw std::invalid_argument("swap_from_quadratures: dim must lie in [1, 10]");
  const std::array<double, 4> eps{4e-3, 2e-3, 1e-3, 5e-4};
  // Lagrange extrapolation to eps = 0.
  TwoModeOperator E = TwoModeOperator::Zero(dim * dim, dim * dim);
  for (std::size_t i = 0; i < eps.size(); ++i) {
    double w = 1.0;
    for (std::size_t j = 0; j < eps.size(); ++j)
      if (j != i) w *= eps[j] / (eps[j] - eps[i]);
    E += w * swap_at(dim, eps[i]);
  }
  return E;
}

Eigen::MatrixXd kolmogorov_kernel_gram(const std::vector<double>& points, double eps) {
  if (!(eps > 0)) throw std::invalid_argument("kolmogorov_kernel_gram: eps must be positive");
  // K(u) = 1/2 int_0^inf dk k e^{-eps k^2} cos(k u), by positive-weight quadrature in k.
  const double kmax = std::sqrt(40.0 / eps);
  const QuadratureRule ks = composite_gauss_legendre(0.0, kmax, static_cast<int>(std::ceil(kmax / 0.5)), 10);
  const Eigen::Index n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double u = points[i] - points[j];
      double acc = 0.0;
      for (Eigen::Index q = 0; q < ks.size(); ++q) {
        const double k = ks.nodes(q);
        acc += ks.weights(q) * k * std::exp(-eps * k * k) * std::cos(k * u);
      }
      G(i, j) = G(j, i) = 0.5 * acc;
    }
  return G;
}

FrameCheckReport swap_expansion_check(int dim, std::uint64_t seed) {
  FrameCheckReport rep;
  rep.name = "swap";
  const TwoModeOperator E = swap_from_quadratures(dim);
  const TwoModeOperator Ex = swap_operator(dim);
  double diag = 0.0;
  for (int n = 0; n < dim; ++n)
    for (int m = 0; m < dim; ++m) diag = std::max(diag, std::abs(E(n * dim + m, m * dim + n) - cplx(1.0)));
  const double opn = operator_norm(E - Ex);
  const double inv = operator_norm(E * E - TwoModeOperator::Identity(dim * dim, dim * dim));
  rep.metrics.push_back({"swap_entries_max_error", diag});
  rep.metrics.push_back({"operator_norm_error", opn});
  rep.metrics.push_back({"involution_error", inv});

  std::mt19937_64 g(seed);
  std::normal_distribution<double> nd;
  Eigen::MatrixXcd B(dim, dim), A(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      B(i, j) = cplx(nd(g), nd(g));
      A(i, j) = cplx(nd(g), nd(g));
    }
  Eigen::MatrixXcd rho = B * B.adjoint();
  rho /= rho.trace();
  A = (A + A.adjoint()).eval();
  const cplx lhs = (kron(rho, A) * E).trace();
  rep.metrics.push_back({"trace_identity_error", std::abs(lhs - (rho * A).trace())});

  std::uniform_real_distribution<double> ud(-5.0, 5.0);
  std::vector<double> pts(40);
  for (auto& p : pts) p = ud(g);
  const Eigen::MatrixXd G = kolmogorov_kernel_gram(pts);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G, Eigen::EigenvaluesOnly);
  const double min_ratio = es.eigenvalues().minCoeff() / es.eigenvalues().maxCoeff();
  rep.metrics.push_back({"kernel_gram_min_eigenvalue_ratio", min_ratio});

  rep.passed = diag < 1e-2 && opn < 1e-2 && inv < 1e-2 && min_ratio >= -1e-10;
  rep.note = "K(x,x') fixed by the regularized k-integral with weight e^{-eps k^2}, extrapolated to eps = 0";
  return rep;
}

Eigen::MatrixXcd kolmogorov_kernel_matrix(int aux) {
  if (aux < 1) throw std::invalid_argument("kolmogorov_kernel_matrix: aux must be positive");
  // K_mn = (pi / sqrt2) i^{n-m} int |u| phi_m phi_n du, nonzero for m + n even.
  const double U = std::sqrt(2.0 * aux) + 10.0;
  const QuadratureRule us = composite_gauss_legendre(0.0, U, 200, 8);
  Eigen::MatrixXd I = Eigen::MatrixXd::Zero(aux, aux);
  for (Eigen::Index q = 0; q < us.size(); ++q) {
    const Eigen::VectorXd phi = hermite_functions(aux - 1, us.nodes(q));
    I += (2.0 * us.weights(q) * us.nodes(q)) * phi * phi.transpose();
  }
  Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(aux, aux);
  for (int m = 0; m < aux; ++m)
    for (int n = 0; n < aux; ++n) {
      if ((m + n) % 2) continue;
      const double sign = ((n - m) / 2) % 2 ? -1.0 : 1.0;
      K(m, n) = sign * kPi / std::sqrt(2.0) * I(m, n);
    }
  return K;
}

AlternateExpansionReport alternate_expansion(const Eigen::MatrixXcd& L, const Eigen::MatrixXcd& Z, double max_condition) {
  if (L.rows() != L.cols() || L.rows() < 1) throw ConfigError("alternate_expansion: L must be square");
  if (Z.rows() != Z.cols()) throw ConfigError("alternate_expansion: Z must be square");
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(L);
  const Eigen::VectorXd sv = svd.singularValues();
  AlternateExpansionReport rep;
  rep.condition = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
  if (!(rep.condition <= max_condition))
    throw NumericError("alternate_expansion: L is ill-conditioned (condition " + std::to_string(rep.condition) + ")");

  const int aux = static_cast<int>(L.rows());
  const int dim = static_cast<int>(Z.rows());
  const Eigen::MatrixXcd K = kolmogorov_kernel_matrix(aux);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(K);
  const Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXcd Kh = es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
  const Eigen::MatrixXd C = triple_overlaps(dim, aux);

  // M_l = sum_m (L K^{1/2})_{lm} psi_m, L_l = sum_m conj((K^{1/2} L^{-1})_{ml}) psi_m;
  // sum_l Tr[L_l^dag Z] M_l = sum_{mn} G_mn Tr[psi_m(X) Z] psi_n(X).
  auto reconstruct = [&](const Eigen::MatrixXcd& Lm) {
    const Eigen::MatrixXcd coefM = Lm * Kh;
    const Eigen::MatrixXcd coefL = (Kh * Lm.inverse()).adjoint();
    const Eigen::MatrixXcd G = coefL.adjoint() * coefM;
    const Eigen::MatrixXcd T = C.cast<cplx>() * G * C.transpose().cast<cplx>();
    // The phase average keeps j - l = l' - j'.
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    for (int j = 0; j < dim; ++j)
      for (int l = 0; l < dim; ++l)
        for (int jp = 0; jp < dim; ++jp) {
          const int lp = jp + j - l;
          if (lp < 0 || lp >= dim) continue;
          out(j, l) += T(jp * dim + lp, j * dim + l) * Z(lp, jp);
        }
    return out;
  };
  const Eigen::MatrixXcd rec = reconstruct(L);
  const Eigen::MatrixXcd canon = reconstruct(Eigen::MatrixXcd::Identity(aux, aux));
  rep.error = (rec - Z).cwiseAbs().maxCoeff();
  rep.canonical_gap = (rec - canon).cwiseAbs().maxCoeff();
  return rep;
}

FrameCheckReport canonical_dual_check(int dim, double tol) {
  if (dim < 3 || dim > 14) throw std::invalid_argument("canonical_dual_check: dim must lie in [3, 14]");
  FrameCheckReport rep;
  rep.name = "dual";
  auto tr_via_kernels = [&](const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& X) {
    cplx acc = 0.0;
    for (int n = 0; n < dim; ++n)
      for (int m = 0; m < dim; ++m) {
        if (X(n, m) == cplx(0.0)) continue;
        const int lo = std::min(n, m);
        const cplx v = integrate_kernel(rho, KernelEvaluator(EstimatorKernel::dyad(lo, std::abs(m - n))), 1.0);
        acc += X(n, m) * (m >= n ? v : std::conj(v));
      }
    return acc;
  };
  Eigen::MatrixXcd P00 = Eigen::MatrixXcd::Zero(dim, dim), P02 = P00;
  P00(0, 0) = 1.0;
  P02(0, 2) = 1.0;
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(dim, dim);
  const std::vector<std::pair<std::string, Eigen::MatrixXcd>> states{
      {"vacuum", state_fock(0, dim).rho}, {"coherent", state_coherent({0.5, 0.3}, dim, {.max_deficit = 1e-3}).rho}};
  const std::vector<std::pair<std::string, Eigen::MatrixXcd>> targets{{"P00", P00}, {"P02", P02}, {"I", I}};
  double worst = 0.0;
  for (const auto& [sname, rho] : states)
    for (const auto& [tname, X] : targets) {
      const double e = std::abs(tr_via_kernels(rho, X) - (rho * X).trace());
      rep.metrics.push_back({sname + "_" + tname + "_abs_error", e});
      worst = std::max(worst, e);
    }
  rep.passed = worst < tol;
  rep.note = "Tr[W X] from the regularized dyad pattern functions";
  return rep;
}

}  // namespace homotomo
