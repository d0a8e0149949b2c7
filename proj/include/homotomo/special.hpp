#pragma once

// Special functions used throughout: Hermite/Laguerre recurrences, Hermite
// functions on the quadrature axis, factorial helpers.

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace homotomo {

inline double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

/// Binomial coefficient as a double; exact for the moderate arguments used here.
inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

/// Physicists' Hermite polynomial H_n(y) by the three-term recurrence.
template <typename Scalar>
Scalar hermite(int n, const Scalar& y) {
  if (n == 0) return Scalar(1);
  Scalar prev(1), cur = Scalar(2) * y;
  for (int k = 1; k < n; ++k) {
    Scalar next = Scalar(2) * y * cur - Scalar(2 * k) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// h_n(x) = 2^{-n/2} H_n(sqrt(2) x), evaluated without irrational factors:
/// h_0 = 1, h_1 = 2x, h_{n+1} = 2x h_n - n h_{n-1}.
template <typename Scalar>
Scalar hermite_scaled(int n, const Scalar& x) {
  if (n == 0) return Scalar(1);
  const Scalar two_x = Scalar(2) * x;
  Scalar prev(1), cur = two_x;
  for (int k = 1; k < n; ++k) {
    Scalar next = two_x * cur - Scalar(k) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Normalized Hermite functions phi_k(y) = H_k(y) e^{-y^2/2} / sqrt(2^k k! sqrt(pi)),
/// k = 0..nmax, by the stable orthonormal recurrence.
inline Eigen::VectorXd hermite_functions(int nmax, double y) {
  Eigen::VectorXd out(nmax + 1);
  out(0) = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * y * y);
  if (nmax >= 1) out(1) = std::sqrt(2.0) * y * out(0);
  for (int k = 1; k < nmax; ++k)
    out(k + 1) = std::sqrt(2.0 / (k + 1)) * y * out(k) - std::sqrt(static_cast<double>(k) / (k + 1)) * out(k - 1);
  return out;
}

/// Quadrature-axis wavefunctions <n|x>_0 for n = 0..nmax, with the convention
/// X = (a^dag + a)/2 (vacuum variance 1/4):
/// psi_n(x) = (2/pi)^{1/4} (2^n n!)^{-1/2} H_n(sqrt 2 x) e^{-x^2}.
inline Eigen::VectorXd quadrature_wavefunctions(int nmax, double x) {
  return std::pow(2.0, 0.25) * hermite_functions(nmax, std::sqrt(2.0) * x);
}

/// Generalized Laguerre polynomial L_n^{(alpha)}(x).
inline double laguerre(int n, double alpha, double x) {
  if (n == 0) return 1.0;
  double prev = 1.0, cur = 1.0 + alpha - x;
  for (int k = 1; k < n; ++k) {
    double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace homotomo
