#pragma once

// Quadrature rules and extrapolation shared by the numeric modules.

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <vector>

namespace homotomo {

struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;

  Eigen::Index size() const { return nodes.size(); }
};

/// n-point Gauss-Legendre rule mapped to [a, b].
QuadratureRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// Composite Gauss-Legendre: `panels` equal panels with `order` points each.
QuadratureRule composite_gauss_legendre(double a, double b, int panels, int order);

/// n-point Gauss-Hermite rule for the weight e^{-x^2} (Golub-Welsch).
QuadratureRule gauss_hermite(int n);

/// Uniform periodic trapezoid rule on [a, a + period), n points.
QuadratureRule periodic_trapezoid(int n, double a, double period);

/// Richardson/Neville extrapolation to h -> 0 of values f(h_i) whose error
/// expands in integer powers of h. Returns the extrapolated value and the
/// difference between the last two tableau diagonals as an error estimate.
template <typename T>
struct Extrapolated {
  T value;
  double error;
};

template <typename T>
Extrapolated<T> richardson(std::span<const double> h, std::span<const T> f) {
  std::vector<T> t(f.begin(), f.end());
  const std::size_t n = t.size();
  T previous = t.back();
  for (std::size_t level = 1; level < n; ++level) {
    previous = t[n - 1];
    for (std::size_t i = n - 1; i >= level; --i) {
      // Neville's scheme evaluated at h = 0.
      t[i] = (h[i - level] * t[i] - h[i] * t[i - 1]) / (h[i - level] - h[i]);
    }
  }
  using std::abs;
  return {t.back(), static_cast<double>(abs(t.back() - previous))};
}

}  // namespace homotomo
