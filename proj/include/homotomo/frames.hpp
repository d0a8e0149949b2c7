#pragma once

// Two-mode vectorization |A>> = sum A_nm |n>|m> and frame-theoretic objects on
// the truncated tensor square. Two-mode index (n, m) -> n * dim + m.

#include "homotomo/fock.hpp"

#include <functional>
#include <string>
#include <vector>

namespace homotomo {

using TwoModeOperator = Eigen::MatrixXcd;

Eigen::VectorXcd vectorize(const Eigen::MatrixXcd& A);
Eigen::MatrixXcd devectorize(const Eigen::VectorXcd& v, int dim);
/// A (x) B with the first factor on the slow index.
TwoModeOperator kron(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B);
TwoModeOperator swap_operator(int dim);

struct BlockComparison {
  double abs_error = 0.0;  // max entry difference on the block
  double rel_error = 0.0;  // Frobenius difference / Frobenius norm of the reference
  int block = 0;           // per-mode indices kept
};

/// Compares two-mode operators on indices n, m < dim - margin.
BlockComparison compare_central(const TwoModeOperator& A, const TwoModeOperator& reference, int dim, int margin = 2);

// ---- spectral functions of Z = a - b^dag ------------------------------------

struct RadialGrid {
  double panel = 0.25;
  int order = 10;
  double extra = 7.0;  // integration radius sqrt(2 dim) + extra
};

/// f(|a - b^dag|) = int d^2z/pi f(|z|) |D(z)>><<D(z)| with exact displacement matrix elements.
TwoModeOperator spectral_function(int dim, const std::function<double(double)>& f, const RadialGrid& grid = {});
/// Same operator from the eigendecomposition of the truncated Z^dag Z at dimension big_dim, cut to dim.
TwoModeOperator spectral_function_truncated(int dim, int big_dim, const std::function<double(double)>& f);

// ---- quadrature frame ---------------------------------------------------------

struct FrameGrid {
  int phi_nodes = 0;   // 0: 2 dim + 2
  int x_panels = 120;
  int x_order = 8;
  double half_width = 0.0;  // 0: chosen from dim
};

/// int dphi/pi int dx |P>><<P|, P = |x>_phi <x|, by grid quadrature.
TwoModeOperator frame_operator_quadrature(int dim, const FrameGrid& grid = {});

struct FrameCheckReport {
  std::string name;
  std::vector<std::pair<std::string, double>> metrics;
  bool passed = false;
  std::string note;
};

/// Quadrature frame vs 1/(pi|a - b^dag|), and F F^{-1} on the central block.
FrameCheckReport quadrature_frame_check(int dim, double tol = 5e-3);

/// Tomographic identity with the dyad pattern functions (canonical dual) at cutoff.
FrameCheckReport canonical_dual_check(int dim, double tol = 1e-3);

// ---- moments frame ------------------------------------------------------------

/// sum_{k,l} |a^dag^k a^l>><<a^dag^k a^l| on the truncated space (exact finite sum).
TwoModeOperator moments_frame_operator(int dim);
/// e^{a^dag b^dag} (a^dag a! (x) b^dag b!) e^{ab}.
TwoModeOperator moments_frame_closed(int dim);
/// e^{-ab} (1/a^dag a! (x) 1/b^dag b!) e^{-a^dag b^dag}.
TwoModeOperator moments_frame_inverse(int dim);
/// g_{k,l} = sum_t (-1)^t / (t! sqrt((k-t)!(l-t)!)) |k-t><l-t|.
Eigen::MatrixXcd dual_moment(int k, int l, int dim);
/// max |Tr[g^dag_{k',l'} a^dag^k a^l] - delta delta| over indices <= max_index.
double moments_biorthogonality_error(int max_index);
FrameCheckReport moments_frame_check(int dim);

// ---- swap operator and Kolmogorov expansions --------------------------------------

/// E from int dphi/pi int dk |k|/4 e^{-eps k^2} e^{-ik X} (x) e^{ik X}, extrapolated to eps = 0.
TwoModeOperator swap_from_quadratures(int dim);
/// Gram matrix of the regularized kernel K(x,x') on the given points.
Eigen::MatrixXd kolmogorov_kernel_gram(const std::vector<double>& points, double eps = 1e-3);
FrameCheckReport swap_expansion_check(int dim, std::uint64_t seed = 7);

/// Alternate expansions Z = int dphi/pi sum_l Tr[L_l(X)^dag Z] M_l(X) built from K^{1/2} L^{-1} and L K^{1/2}
/// over Hermite functions psi_0..psi_{aux-1}. Throws NumericError if L is too ill-conditioned.
struct AlternateExpansionReport {
  double error = 0.0;        // max entry difference from Z
  double canonical_gap = 0.0;  // max entry difference from the L = I expansion
  double condition = 0.0;
};
AlternateExpansionReport alternate_expansion(const Eigen::MatrixXcd& L, const Eigen::MatrixXcd& Z, double max_condition = 1e8);
/// Hermite-function matrix elements of the Kolmogorov kernel K(x,x') = int dk/4 |k| e^{ik(x'-x)}.
Eigen::MatrixXcd kolmogorov_kernel_matrix(int aux);

// ---- frames generated from a window function h -------------------------------------

struct FrameKernelSpec {
  enum class Family { Gaussian, Delta, Tabulated } family = Family::Gaussian;
  double sigma = 1.0;
  std::vector<double> grid, values;  // Tabulated: h on an increasing grid, zero outside

  double h(double y) const;
  /// F^{-1}[h](k) = int dy e^{-iky} h(y) (real for even h).
  cplx transform(double k) const;
  /// f(t) = |F^{-1}[h](2t)|^2 / (pi t), so that t f(t) is returned to stay finite at 0.
  double t_times_f(double t) const;
  /// Canonical dual window in transform space, pi |k| / (2 conj F^{-1}[h](k)); a distribution for Gaussian h.
  cplx dual_transform(double k) const;
  std::string describe() const;
};

/// Window frame Xi(x,phi) = h(X_phi - x) with frame operator by grid quadrature,
/// compared with f(|a - b^dag|). Throws ConfigError if the transform of h vanishes on the band.
FrameCheckReport generate_frame(const FrameKernelSpec& spec, int dim, double tol = 5e-3);
TwoModeOperator window_frame_operator(const FrameKernelSpec& spec, int dim, const FrameGrid& grid = {});

// ---- double commutator ------------------------------------------------------------

/// [a^dag, [a, A]] on the truncated space.
Eigen::MatrixXcd double_commutator(const Eigen::MatrixXcd& A);
/// -(L[a] + L[a^dag]) A with L[W]A = W^dag A W - (W^dag W A + A W^dag W)/2.
Eigen::MatrixXcd lindblad_form(const Eigen::MatrixXcd& A);
FrameCheckReport double_commutator_check(int dim, std::uint64_t seed = 11);

// ---- other frames --------------------------------------------------------------------

enum class OtherFamily {
  A,          // e^{-X^2/2} X^n as printed
  B,          // (2/pi)^{1/4} (2^n n!)^{-1/2} e^{-X^2} H_n(sqrt2 X)
  ARescaled,  // pi^{1/4} e^{-X^2} (sqrt2 X)^n / sqrt(n!)
};
TwoModeOperator other_frame_operator(OtherFamily family, int dim, int nmax, const FrameGrid& grid = {});
FrameCheckReport other_frames_check(int dim, double tol = 5e-3);

}  // namespace homotomo
