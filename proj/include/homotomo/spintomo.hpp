#pragma once

// Spin-J tomography over the quorum of directions: swap-operator expansion and
// the estimator it induces. Spin labels r = -J..J are carried as 2r; matrix
// index i = r + J.

#include "homotomo/estimators.hpp"
#include "homotomo/frames.hpp"

#include <cstdint>

namespace homotomo {

struct SpinKernel {
  int two_j = 1;
  Eigen::MatrixXd K;  // K(r, s) = (J + 1/2)/2 (2 delta_rs - delta_{r,s+1} - delta_{r,s-1})

  double J() const { return 0.5 * two_j; }
  int dim() const { return two_j + 1; }
};

SpinKernel spin_kernel(int two_j);

struct SpinOperators {
  Eigen::MatrixXcd x, y, z;
};
SpinOperators spin_operators(int two_j);

/// J.n for the unit vector with polar angle theta and azimuth phi.
Eigen::MatrixXcd spin_along(const SpinOperators& s, double theta, double phi);

/// int dn/4pi int_0^{2pi} dpsi sin^2(psi/2) e^{i psi J.n} (x) e^{-i psi J.n} by product quadrature:
/// `order` Gauss-Legendre nodes in cos(theta), 2 order uniform in phi, 2 order + 1 trapezoid in psi.
TwoModeOperator quorum_swap_integral(int two_j, int order);

struct SwapReconstruction {
  TwoModeOperator E;
  int order = 0;
  double refinement_error = 0.0;  // operator norm between the last two refinements
  double error = 0.0;             // operator norm distance to the exact swap
  double involution_error = 0.0;  // operator norm of E^2 - I
};

/// E = (2J+1)/pi * quorum_swap_integral, doubling the order from `order` until two successive
/// results agree within tol. Throws NumericError if max_order is reached first.
SwapReconstruction swap_from_quorum(int two_j, int order = 2, double tol = 1e-12, int max_order = 128);

/// Simulated measurements of J.n along uniformly random n; each outcome r contributes
/// sum_s 2K(r,s) Tr[A P_s(n)].
EstimateReport spin_estimate_demo(int two_j, const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& A, std::size_t shots,
                                  std::uint64_t seed);

}  // namespace homotomo
