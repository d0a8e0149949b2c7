#include "homotomo/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace homotomo {

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  QuadratureRule rule{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = 0.0;
    for (int k = 1; k <= n; ++k) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
    }
    dp = n * (z * p0 - p1) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes(i) = mid - half * z;
    rule.nodes(n - 1 - i) = mid + half * z;
    rule.weights(i) = rule.weights(n - 1 - i) = half * w;
  }
  return rule;
}

QuadratureRule composite_gauss_legendre(double a, double b, int panels, int order) {
  const QuadratureRule base = gauss_legendre(order);
  QuadratureRule rule{Eigen::VectorXd(panels * order), Eigen::VectorXd(panels * order)};
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    for (int i = 0; i < order; ++i) {
      rule.nodes(p * order + i) = lo + 0.5 * width * (base.nodes(i) + 1.0);
      rule.weights(p * order + i) = 0.5 * width * base.weights(i);
    }
  }
  return rule;
}

QuadratureRule gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: n must be positive");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  QuadratureRule rule{solver.eigenvalues(), Eigen::VectorXd(n)};
  const double mu0 = std::sqrt(std::numbers::pi);
  for (int i = 0; i < n; ++i) {
    const double v = solver.eigenvectors()(0, i);
    rule.weights(i) = mu0 * v * v;
  }
  return rule;
}

QuadratureRule periodic_trapezoid(int n, double a, double period) {
  QuadratureRule rule{Eigen::VectorXd(n), Eigen::VectorXd::Constant(n, period / n)};
  for (int i = 0; i < n; ++i) rule.nodes(i) = a + period * i / n;
  return rule;
}

}  // namespace homotomo
