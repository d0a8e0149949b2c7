#include "kernels_detail.hpp"

#include "homotomo/errors.hpp"
#include "homotomo/quadrature.hpp"
#include "homotomo/special.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace homotomo {

namespace {
constexpr double kPi = std::numbers::pi;
}

cplx eval_moment(int n, int m, double x, double phi) {
  if (n < 0 || m < 0) throw std::invalid_argument("eval_moment: negative index");
  const double h = hermite_scaled(n + m, x) / binomial(n + m, n);
  return h * std::polar(1.0, (m - n) * phi);
}

cplx eval_displacement(cplx alpha, double x, double phi) {
  const cplx z = 2.0 * x * std::polar(1.0, -phi) * alpha;
  if (std::abs(z.real()) > 700.0) throw NumericError("eval_displacement: exponent out of range");
  // Divided difference of g(t) = t e^t between a = z and b = -z*.
  const cplx a = z, b = -std::conj(z);
  const cplx diff = a - b;  // = z + z*, real
  if (std::abs(diff) < 1e-6 * (1.0 + std::abs(z))) {
    // sum_{k>=1} g^{(k)}(b) diff^{k-1} / k!, g^{(k)}(t) = e^t (t + k)
    const cplx eb = std::exp(b);
    cplx sum = 0.0, pw = 1.0;
    double fact = 1.0;
    for (int k = 1; k <= 6; ++k) {
      fact *= k;
      sum += eb * (b + double(k)) * pw / fact;
      pw *= diff;
    }
    return sum;
  }
  return (a * std::exp(a) - b * std::exp(b)) / diff;
}

cplx eval_displacement_series(cplx alpha, double x, double phi, int order) {
  const cplx z = 2.0 * x * std::polar(1.0, -phi) * alpha;
  const cplx w = -std::conj(z);
  std::vector<cplx> zp(order + 1, 1.0), wp(order + 1, 1.0);
  for (int i = 1; i <= order; ++i) {
    zp[i] = zp[i - 1] * z;
    wp[i] = wp[i - 1] * w;
  }
  cplx total = 0.0;
  double inv_fact = 1.0;
  for (int s = 0; s <= order; ++s) {
    if (s > 0) inv_fact /= s;
    cplx inner = 0.0;
    for (int n = 0; n <= s; ++n) inner += zp[n] * wp[s - n];
    total += inner * inv_fact;
  }
  return total;
}

cplx eval_displacement_theta(cplx alpha, double x, double phi, int nodes) {
  const QuadratureRule gl = gauss_legendre(nodes, 0.0, 1.0);
  cplx total = 0.0;
  for (Eigen::Index q = 0; q < gl.size(); ++q) {
    const double th = gl.nodes(q);
    const cplx beta = 2.0 * std::polar(1.0, -phi) * alpha * (1.0 - th) - 2.0 * std::polar(1.0, phi) * std::conj(alpha) * th;
    // d/dx [x e^{x beta}] = e^{x beta} (1 + x beta)
    total += gl.weights(q) * std::exp(x * beta) * (1.0 + x * beta);
  }
  return total;
}

namespace detail {

DyadWeights make_dyad_weights(int n, int d, double eta) {
  if (n < 0 || d < 0) throw std::invalid_argument("dyad indices must be nonnegative");
  if (!(eta > 0.5)) throw InsufficientEfficiency("dyad estimators need eta > 1/2 (got " + std::to_string(eta) + ")");
  if (eta > 1.0) throw std::invalid_argument("efficiency above 1");
  const double c = (2.0 * eta - 1.0) / (8.0 * eta);  // Gaussian decay rate in k
  double K = 2.0;
  while (c * K * K - (2 * n + d + 2) * std::log(K) < 46.0) {
    K += 0.5;
    if (K > 4000.0) throw NumericError("dyad k-integral does not converge at this efficiency");
  }
  const int panels = static_cast<int>(std::ceil(K / 0.5));
  const QuadratureRule rule = composite_gauss_legendre(0.0, K, panels, 10);

  // Regularizer e^{-eps k^2}; at eta = 1 values at three eps are extrapolated to eps = 0.
  std::vector<double> eps{0.0}, lambda{1.0}, lambda_err{0.0};
  if (eta == 1.0) {
    eps = {1e-2, 5e-3, 2.5e-3};
    lambda.assign(3, 1.0);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (j != i) lambda[i] *= -eps[j] / (eps[i] - eps[j]);
    // Previous tableau diagonal: linear extrapolation through the two smallest eps.
    const std::array<double, 3> lin{0.0, -eps[2] / (eps[1] - eps[2]), -eps[1] / (eps[2] - eps[1])};
    lambda_err.resize(3);
    for (int i = 0; i < 3; ++i) lambda_err[i] = lambda[i] - lin[i];
  }

  const double norm = std::exp(0.5 * (log_factorial(n) - log_factorial(n + d)));
  const double sign = ((d / 2) % 2 == 0) ? 1.0 : -1.0;  // (-1)^{floor(d/2)}
  DyadWeights dw;
  dw.d = d;
  dw.k = rule.nodes;
  dw.w = Eigen::VectorXd::Zero(rule.size());
  dw.werr = Eigen::VectorXd::Zero(rule.size());
  for (Eigen::Index j = 0; j < rule.size(); ++j) {
    const double k = rule.nodes(j);
    const double base = rule.weights(j) * sign * norm * 0.5 * k * std::pow(0.5 * k, d) *
                        std::exp(-c * k * k) * laguerre(n, d, 0.25 * k * k);
    for (std::size_t e = 0; e < eps.size(); ++e) {
      const double reg = std::exp(-eps[e] * k * k);
      dw.w(j) += lambda[e] * base * reg;
      dw.werr(j) += lambda_err[e] * base * reg;
    }
  }
  return dw;
}

double dyad_radial(const DyadWeights& dw, const Eigen::VectorXd& weights, double x) {
  double acc = 0.0;
  if (dw.d % 2 == 0)
    for (Eigen::Index j = 0; j < dw.k.size(); ++j) acc += weights(j) * std::cos(dw.k(j) * x);
  else
    for (Eigen::Index j = 0; j < dw.k.size(); ++j) acc += weights(j) * std::sin(dw.k(j) * x);
  return acc;
}

cplx moment_dual_value(int n, int m, int order, double x, double phi) {
  if (n < 0 || m < 0 || order < 0) throw std::invalid_argument("moment dual: negative index");
  const int Nmax = n + m + 2 * order;
  const Eigen::VectorXd hf = hermite_functions(Nmax, std::sqrt(2.0) * x);
  const double lead = -0.5 * (log_factorial(n) + log_factorial(m)) + x * x + 0.25 * std::log(kPi);
  double acc = 0.0;
  for (int t = 0; t <= order; ++t) {
    const int N = n + m + 2 * t;
    // (-1)^t / (t! sqrt(n! m!)) C(N, n+t)^{-1} h_N(x),  h_N = sqrt(N!) pi^{1/4} e^{x^2} phi_N(sqrt2 x)
    const double logc = lead - log_factorial(t) + log_factorial(n + t) + log_factorial(m + t) - 0.5 * log_factorial(N);
    const double term = std::exp(logc) * hf(N);
    acc += (t % 2 ? -term : term);
  }
  return acc * std::polar(1.0, (m - n) * phi);
}

cplx noisy_moment(int n, int m, double nbar, double x, double phi) {
  // <a^dag^n a^m> = sum_j j! C(n,j) C(m,j) (-nbar)^j <a^dag^{n-j} a^{m-j}>_noisy
  cplx acc = 0.0;
  double pw = 1.0;
  for (int j = 0; j <= std::min(n, m); ++j, pw *= -nbar)
    acc += std::exp(log_factorial(j)) * binomial(n, j) * binomial(m, j) * pw * eval_moment(n - j, m - j, x, phi);
  return acc;
}

UnboundedG::UnboundedG(const Eigen::MatrixXcd& target, const GQuadrature& gq)
    : X(target), theta(gauss_legendre(gq.theta_nodes, 0.0, 1.0)), gh(gauss_hermite(gq.s_nodes)) {
  if (2 * gq.s_nodes - 1 < 2 * static_cast<int>(target.rows()))
    throw NumericError("UNBOUNDED_G: too few Gauss-Hermite nodes for the target degree");
}

cplx UnboundedG::operator()(double x, double phi) const {
  const int dim = static_cast<int>(X.rows());
  const int pmax = 2 * (dim - 1);
  const cplx em = std::polar(1.0, -phi), ep = std::polar(1.0, phi);
  cplx total = 0.0;
  Eigen::VectorXcd B(pmax + 1);
  std::vector<cplx> pa(dim), pb(dim);
  for (Eigen::Index q = 0; q < theta.size(); ++q) {
    const double th = theta.nodes(q);
    const double qq = th * (1.0 - th), c = 0.5 - qq;
    // B_p = sum_{j+k=p} X_jk (-i(1-th)e^{-i phi})^j (-i th e^{i phi})^k / sqrt(j! k!)
    const cplx u = cplx(0, -1) * (1.0 - th) * em, v = cplx(0, -1) * th * ep;
    pa[0] = pb[0] = 1.0;
    for (int j = 1; j < dim; ++j) {
      pa[j] = pa[j - 1] * u / std::sqrt(double(j));
      pb[j] = pb[j - 1] * v / std::sqrt(double(j));
    }
    B.setZero();
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k)
        if (X(j, k) != 0.0) B(j + k) += X(j, k) * pa[j] * pb[k];
    cplx inner = 0.0;
    for (Eigen::Index i = 0; i < gh.size(); ++i) {
      const cplx t = gh.nodes(i) / std::sqrt(c) + cplx(0, x / c);
      cplx tp = 1.0, P = 0.0;
      const cplx t2 = t * t;
      for (int p = 0; p <= pmax; ++p, tp *= t) P += B(p) * tp * ((1.0 + p) + 2.0 * qq * t2);
      inner += gh.weights(i) * P;
    }
    total += theta.weights(q) * std::exp(-2.0 * qq * x * x / c) / std::sqrt(2.0 * kPi * c) * inner;
  }
  return total;
}

}  // namespace detail

cplx eval_dyad(int n, int d, double eta, double x, double phi) {
  const detail::DyadWeights dw = detail::make_dyad_weights(n, d, eta);
  return detail::dyad_radial(dw, dw.w, x) * std::polar(1.0, d * phi);
}

cplx eval_moment_dual(int n, int m, int order, double x, double phi) {
  return detail::moment_dual_value(n, m, order, x, phi);
}

}  // namespace homotomo
