#pragma once

#include "homotomo/estimators.hpp"
#include "homotomo/quadrature.hpp"

namespace homotomo::detail {

/// Radial part of a dyad pattern function as a fixed trigonometric sum
/// r(x) = sum_j w_j cos(k_j x) (d even) or sin(k_j x) (d odd).
struct DyadWeights {
  int d = 0;
  Eigen::VectorXd k, w, werr;
};

DyadWeights make_dyad_weights(int n, int d, double eta);
double dyad_radial(const DyadWeights& dw, const Eigen::VectorXd& weights, double x);

cplx moment_dual_value(int n, int m, int order, double x, double phi);
/// Moment estimator corrected for Gaussian noise of occupation nbar.
cplx noisy_moment(int n, int m, double nbar, double x, double phi);

/// Tr[X W'_{phi,x}] from the unbounded-operator expansion, after shifting the
/// t-contour so that the Gaussian integral is done exactly by Gauss-Hermite.
struct UnboundedG {
  UnboundedG(const Eigen::MatrixXcd& target, const GQuadrature& gq);
  cplx operator()(double x, double phi) const;

  Eigen::MatrixXcd X;
  QuadratureRule theta, gh;
};

}  // namespace homotomo::detail
