#include "homotomo/spintomo.hpp"

#include "homotomo/errors.hpp"
#include "homotomo/quadrature.hpp"
#include "homotomo/sampler.hpp"

#include <cmath>
#include <numbers>

namespace homotomo {
namespace {

constexpr double kPi = std::numbers::pi;

void check_two_j(int two_j) {
  if (two_j < 1 || two_j > 16) throw ConfigError("spin: 2J must lie in [1, 16]");
}

double operator_norm(const Eigen::MatrixXcd& A) { return Eigen::JacobiSVD<Eigen::MatrixXcd>(A).singularValues()(0); }

}  // namespace

SpinKernel spin_kernel(int two_j) {
  check_two_j(two_j);
  SpinKernel k;
  k.two_j = two_j;
  const int d = two_j + 1;
  const double c = 0.5 * (0.5 * two_j + 0.5);
  k.K = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    k.K(i, i) = 2.0 * c;
    if (i + 1 < d) k.K(i, i + 1) = k.K(i + 1, i) = -c;
  }
  return k;
}

SpinOperators spin_operators(int two_j) {
  check_two_j(two_j);
  const int d = two_j + 1;
  const double J = 0.5 * two_j;
  SpinOperators s;
  s.z = Eigen::MatrixXcd::Zero(d, d);
  Eigen::MatrixXcd up = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const double m = i - J;
    s.z(i, i) = m;
    if (i + 1 < d) up(i + 1, i) = std::sqrt(J * (J + 1) - m * (m + 1));
  }
  s.x = 0.5 * (up + up.adjoint());
  s.y = cplx(0.0, -0.5) * (up - up.adjoint());
  return s;
}

Eigen::MatrixXcd spin_along(const SpinOperators& s, double theta, double phi) {
  return std::sin(theta) * std::cos(phi) * s.x + std::sin(theta) * std::sin(phi) * s.y + std::cos(theta) * s.z;
}

TwoModeOperator quorum_swap_integral(int two_j, int order) {
  check_two_j(two_j);
  if (order < 1) throw ConfigError("spin: quadrature order must be positive");
  const SpinOperators s = spin_operators(two_j);
  const int d = two_j + 1;
  const QuadratureRule ct = gauss_legendre(order, -1.0, 1.0);
  const QuadratureRule ph = periodic_trapezoid(2 * order, 0.0, 2.0 * kPi);
  const QuadratureRule ps = periodic_trapezoid(2 * order + 1, 0.0, 2.0 * kPi);
  TwoModeOperator E = TwoModeOperator::Zero(d * d, d * d);
  for (Eigen::Index i = 0; i < ct.size(); ++i)
    for (Eigen::Index j = 0; j < ph.size(); ++j) {
      // dn/4pi = d(cos theta) dphi / 4pi
      const double wn = ct.weights(i) * ph.weights(j) / (4.0 * kPi);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(spin_along(s, std::acos(ct.nodes(i)), ph.nodes(j)));
      for (Eigen::Index k = 0; k < ps.size(); ++k) {
        const double psi = ps.nodes(k);
        const double w = wn * ps.weights(k) * std::pow(std::sin(0.5 * psi), 2);
        Eigen::VectorXcd phase(d);
        for (int r = 0; r < d; ++r) phase(r) = std::polar(1.0, psi * es.eigenvalues()(r));
        const Eigen::MatrixXcd U = es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
        E += w * kron(U, U.adjoint());
      }
    }
  return E;
}

SwapReconstruction swap_from_quorum(int two_j, int order, double tol, int max_order) {
  check_two_j(two_j);
  const double pref = (two_j + 1.0) / kPi;
  SwapReconstruction rec;
  rec.order = order;
  rec.E = pref * quorum_swap_integral(two_j, order);
  for (;;) {
    if (2 * rec.order > max_order)
      throw NumericError("swap_from_quorum: refinement did not settle below tolerance by order " + std::to_string(max_order));
    const TwoModeOperator finer = pref * quorum_swap_integral(two_j, 2 * rec.order);
    rec.refinement_error = operator_norm(finer - rec.E);
    rec.E = finer;
    rec.order *= 2;
    if (rec.refinement_error <= tol) break;
  }
  const int d = two_j + 1;
  rec.error = operator_norm(rec.E - swap_operator(d));
  rec.involution_error = operator_norm(rec.E * rec.E - TwoModeOperator::Identity(d * d, d * d));
  return rec;
}

EstimateReport spin_estimate_demo(int two_j, const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& A, std::size_t shots,
                                  std::uint64_t seed) {
  check_two_j(two_j);
  const int d = two_j + 1;
  if (rho.rows() != d || rho.cols() != d || A.rows() != d || A.cols() != d)
    throw ConfigError("spin_estimate_demo: operators must be (2J+1) x (2J+1)");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10 || std::abs(rho.trace() - cplx(1.0)) > 1e-10)
    throw ConfigError("spin_estimate_demo: rho must be a Hermitian unit-trace matrix");
  if (Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(rho).eigenvalues().minCoeff() < -1e-10)
    throw ConfigError("spin_estimate_demo: rho must be positive");
  if (shots < 2) throw ConfigError("spin_estimate_demo: need at least two shots");

  const SpinOperators s = spin_operators(two_j);
  const Eigen::MatrixXd K2 = 2.0 * spin_kernel(two_j).K;
  std::mt19937_64 g = chunk_engine(seed, 0);
  std::vector<double> re(shots), im(shots);
  for (std::size_t t = 0; t < shots; ++t) {
    const double theta = std::acos(2.0 * uniform_open(g) - 1.0);
    const double phi = 2.0 * kPi * uniform_open(g);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(spin_along(s, theta, phi));
    const Eigen::MatrixXcd& V = es.eigenvectors();
    // eigenvalues ascend, so column i carries r = i - J
    const double u = uniform_open(g);
    double cum = 0.0;
    int r = d - 1;
    for (int i = 0; i < d; ++i) {
      cum += std::max(0.0, (V.col(i).adjoint() * rho * V.col(i))(0).real());
      if (u < cum) {
        r = i;
        break;
      }
    }
    cplx f = 0.0;
    for (int q = 0; q < d; ++q) f += K2(r, q) * (V.col(q).adjoint() * A * V.col(q))(0);
    re[t] = f.real();
    im[t] = f.imag();
  }
  auto mean_se = [&](const std::vector<double>& v) {
    const double m = pairwise_sum(v.data(), v.size()) / v.size();
    std::vector<double> dev(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) dev[i] = (v[i] - m) * (v[i] - m);
    return std::pair{m, std::sqrt(pairwise_sum(dev.data(), dev.size()) / (v.size() - 1) / v.size())};
  };
  const auto [mr, sr] = mean_se(re);
  const auto [mi, si] = mean_se(im);
  EstimateReport rep;
  rep.value = {mr, mi};
  rep.stderr_re = sr;
  rep.stderr_im = si;
  rep.n = shots;
  rep.kernel = "spin:2J=" + std::to_string(two_j);
  return rep;
}

}  // namespace homotomo
