#pragma once

// Estimator kernels f_phi(x|X) and the averaging engine.

#include "homotomo/fock.hpp"
#include "homotomo/sampler.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace homotomo {

// ---- closed-form kernels -------------------------------------------------

/// C(n+m,n)^{-1} 2^{-(n+m)/2} H_{n+m}(sqrt2 x) e^{i phi (m-n)}; estimator of a^dag^n a^m.
cplx eval_moment(int n, int m, double x, double phi);

/// Displacement estimator (z e^z + z* e^{-z*}) / (z + z*), z = 2 x e^{-i phi} alpha.
cplx eval_displacement(cplx alpha, double x, double phi);
/// Same quantity from the double series sum_{n+k <= order} z^n (-z*)^k / (n+k)!.
cplx eval_displacement_series(cplx alpha, double x, double phi, int order = 40);
/// Same quantity from d/dx x int_0^1 d theta exp(-2x e^{i phi} alpha* theta) exp(2x e^{-i phi} alpha (1-theta)).
cplx eval_displacement_theta(cplx alpha, double x, double phi, int nodes = 40);

/// Pattern function of |n><n+d| at efficiency eta (> 1/2).
cplx eval_dyad(int n, int d, double eta, double x, double phi);

/// Estimator of |n><m| from the normal-ordered-moments dual, truncated at `order` contractions.
cplx eval_moment_dual(int n, int m, int order, double x, double phi);

// ---- kernel descriptors --------------------------------------------------

enum class KernelKind { Dyad, Moment, Displacement, SimpleA, SimpleNum, MomentDual, UnboundedG };

struct GQuadrature {
  int theta_nodes = 40;
  int s_nodes = 60;
};

struct EstimatorKernel {
  KernelKind kind = KernelKind::Moment;
  int n = 0;
  int m = 0;          // second index; the offset d for Dyad
  int order = 12;     // MomentDual truncation
  cplx alpha = 0.0;   // Displacement
  double eta = 1.0;   // efficiency the data were taken with
  Eigen::MatrixXcd target;  // UnboundedG: operator X (finite rank)
  GQuadrature gq;

  static EstimatorKernel dyad(int n, int d, double eta = 1.0);
  static EstimatorKernel moment(int n, int m);
  static EstimatorKernel displacement(cplx alpha);
  static EstimatorKernel simple_a();
  static EstimatorKernel simple_num();
  static EstimatorKernel moment_dual(int n, int m, int order);
  static EstimatorKernel unbounded_g(const Eigen::MatrixXcd& target, GQuadrature gq = {});

  /// Parses descriptors such as "moment:1,1", "disp:0.3,0.0", "dyad:0,0", "dual:0,0,12", "a", "num".
  static EstimatorKernel parse(const std::string& text, double eta = 1.0);
  std::string describe() const;
  /// Operator the kernel estimates, on the truncated space of dimension dim.
  Eigen::MatrixXcd target_operator(int dim) const;
};

/// Precomputed, thread-safe evaluator of a kernel (including noise unbiasing).
class KernelEvaluator {
 public:
  explicit KernelEvaluator(const EstimatorKernel& kernel);
  cplx operator()(double x, double phi) const { return fn_(x, phi); }
  /// Extrapolation error bound attached to eta = 1 dyad kernels; 0 otherwise.
  double extrapolation_error(double x) const { return err_ ? err_(x) : 0.0; }
  const EstimatorKernel& kernel() const { return kernel_; }

 private:
  EstimatorKernel kernel_;
  std::function<cplx(double, double)> fn_;
  std::function<double(double)> err_;
};

// ---- noise unbiasing -----------------------------------------------------

/// Thermal-equivalent occupation of efficiency eta under additive Gaussian smearing.
inline double eta_to_nbar(double eta) { return (1.0 - eta) / (2.0 * eta); }

/// Marks the kernel for data taken at efficiency eta; requires eta > 1/(2s) with s = 1.
EstimatorKernel unbias_eta(EstimatorKernel kernel, double eta);
/// Same for Gaussian noise of mean thermal photon number nbar; requires nbar < s - 1/2.
EstimatorKernel unbias_gaussian(EstimatorKernel kernel, double nbar);
/// Displacement-frame coefficient rescaling D(alpha) -> D(alpha) e^{nbar |alpha|^2}.
cplx unbias_gaussian_coefficient(cplx coefficient, cplx alpha, double nbar);

// ---- estimation ----------------------------------------------------------

struct EstimateReport {
  cplx value = 0.0;
  double stderr_re = 0.0;
  double stderr_im = 0.0;
  std::size_t n = 0;
  std::string kernel;
  bool stratified = false;
  double extrapolation_error = 0.0;
};

/// Pairwise (cascade) summation; result independent of thread count.
double pairwise_sum(const double* v, std::size_t n);

EstimateReport estimate(const std::vector<QuadratureRecord>& records, const EstimatorKernel& kernel,
                        unsigned threads = 0);

struct IntegrationOptions {
  int phi_nodes = 32;     // periodic trapezoid on [0, pi)
  int x_panels = 96;      // composite Gauss-Legendre on [-L, L]
  int x_order = 8;
  double half_width = 0;  // 0: chosen from the state
};

/// int_0^pi dphi/pi int dx p_eta(x|phi) f(x, phi) by deterministic quadrature.
cplx integrate_kernel(const Eigen::MatrixXcd& rho, const KernelEvaluator& f, double eta,
                      const IntegrationOptions& opts = {});

// ---- Pauli channel demo --------------------------------------------------

struct PauliDemoReport {
  Eigen::Vector3d bloch_true;
  Eigen::Vector3d estimate;
  Eigen::Vector3d stderr_;
  std::size_t shots_per_axis = 0;
  double p = 0.0;
};

/// Qubit tomography through the depolarizing channel (1-p) I + (p/2) T, unbiased
/// with N^{-1 dag} = I/(1-p) - p T / (2(1-p)).
PauliDemoReport pauli_demo(double p, const Eigen::Vector3d& bloch, std::size_t shots, std::uint64_t seed);

}  // namespace homotomo
