#include "homotomo/frames.hpp"

#include "homotomo/errors.hpp"
#include "homotomo/quadrature.hpp"
#include "homotomo/special.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace homotomo {
namespace {

constexpr double kPi = std::numbers::pi;

double default_half_width(int dim) { return std::sqrt(static_cast<double>(dim)) + 5.0; }

// Column vec(psi_j psi_l)(y) for every node y: rows (j, l), columns nodes.
Eigen::MatrixXd product_table(int dim, const Eigen::VectorXd& ys) {
  Eigen::MatrixXd out(dim * dim, ys.size());
  for (Eigen::Index q = 0; q < ys.size(); ++q) {
    const Eigen::VectorXd psi = quadrature_wavefunctions(dim - 1, ys(q));
    for (int j = 0; j < dim; ++j)
      for (int l = 0; l < dim; ++l) out(j * dim + l, q) = psi(j) * psi(l);
  }
  return out;
}

// sum_x w_x |Xi(x, phi)>><<Xi(x, phi)| averaged over a phase grid, with
// Xi_jl(x, phi) = e^{i(j-l)phi} radial(jl, x).
TwoModeOperator phase_grid_frame(int dim, const Eigen::MatrixXd& radial, const Eigen::VectorXd& wx, int phi_nodes) {
  const int M = phi_nodes > 0 ? phi_nodes : 2 * dim + 2;
  const Eigen::Index X = radial.cols();
  Eigen::MatrixXcd cols(dim * dim, X * M);
  for (int p = 0; p < M; ++p) {
    const double phi = kPi * p / M;
    for (int j = 0; j < dim; ++j)
      for (int l = 0; l < dim; ++l) {
        const cplx ph = std::polar(1.0 / std::sqrt(static_cast<double>(M)), (j - l) * phi);
        for (Eigen::Index i = 0; i < X; ++i) cols(j * dim + l, p * X + i) = ph * std::sqrt(wx(i)) * radial(j * dim + l, i);
      }
  }
  return cols * cols.adjoint();
}

// Phase average done analytically: only equal j - l survive.
TwoModeOperator phase_averaged_frame(int dim, const Eigen::MatrixXd& radial) {
  const Eigen::MatrixXd G = radial * radial.transpose();
  TwoModeOperator F = TwoModeOperator::Zero(dim * dim, dim * dim);
  for (int j = 0; j < dim; ++j)
    for (int l = 0; l < dim; ++l)
      for (int jp = 0; jp < dim; ++jp) {
        const int lp = jp - j + l;
        if (lp < 0 || lp >= dim) continue;
        F(j * dim + l, jp * dim + lp) = G(j * dim + l, jp * dim + lp);
      }
  return F;
}

// <n|D(r)|n-d> for real r, d of either sign.
double displacement_element(int n, int d, double r) {
  const int m = n - d, lo = std::min(n, m), k = std::abs(d);
  const double mag = 0.5 * (log_factorial(lo) - log_factorial(lo + k)) - 0.5 * r * r + (k ? k * std::log(r) : 0.0);
  const double sign = d < 0 && k % 2 ? -1.0 : 1.0;
  return sign * std::exp(mag) * laguerre(lo, k, r * r);
}

// max |(f(|Z|) g(|Z|))_{ij} - delta_ij| on the central block, the intermediate sum running over indices < big.
// Both operators are block diagonal in d = n - m, so the product is formed sector by sector.
double sector_product_error(int dim, int margin, int big, const std::function<double(double)>& f,
                            const std::function<double(double)>& g) {
  const int c = dim - margin;
  const double R = std::sqrt(2.0 * big) + 7.0;
  const QuadratureRule rule = composite_gauss_legendre(0.0, R, static_cast<int>(std::ceil(R / 0.25)), 10);
  double worst = 0.0;
  for (int d = -(c - 1); d <= c - 1; ++d) {
    const int n0 = std::max(0, d), s = big - std::abs(d);
    Eigen::MatrixXd V(s, rule.size());
    Eigen::VectorXd wf(rule.size()), wg(rule.size());
    for (Eigen::Index q = 0; q < rule.size(); ++q) {
      const double r = rule.nodes(q);
      wf(q) = 2.0 * rule.weights(q) * r * f(r);
      wg(q) = 2.0 * rule.weights(q) * r * g(r);
      for (int i = 0; i < s; ++i) V(i, q) = displacement_element(n0 + i, d, r);
    }
    const Eigen::MatrixXd Fd = V * wf.asDiagonal() * V.transpose();
    const Eigen::MatrixXd Gd = V * wg.asDiagonal() * V.transpose();
    const int keep = c - std::abs(d);
    const Eigen::MatrixXd P = Fd.topRows(keep) * Gd.leftCols(keep);
    worst = std::max(worst, (P - Eigen::MatrixXd::Identity(keep, keep)).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace

Eigen::VectorXcd vectorize(const Eigen::MatrixXcd& A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("vectorize: operator must be square");
  const Eigen::Index d = A.rows();
  Eigen::VectorXcd v(d * d);
  for (Eigen::Index n = 0; n < d; ++n)
    for (Eigen::Index m = 0; m < d; ++m) v(n * d + m) = A(n, m);
  return v;
}

Eigen::MatrixXcd devectorize(const Eigen::VectorXcd& v, int dim) {
  if (v.size() != static_cast<Eigen::Index>(dim) * dim) throw std::invalid_argument("devectorize: size is not dim^2");
  Eigen::MatrixXcd A(dim, dim);
  for (int n = 0; n < dim; ++n)
    for (int m = 0; m < dim; ++m) A(n, m) = v(n * dim + m);
  return A;
}

TwoModeOperator kron(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B) { return Eigen::kroneckerProduct(A, B).eval(); }

TwoModeOperator swap_operator(int dim) {
  TwoModeOperator E = TwoModeOperator::Zero(dim * dim, dim * dim);
  for (int n = 0; n < dim; ++n)
    for (int m = 0; m < dim; ++m) E(n * dim + m, m * dim + n) = 1.0;
  return E;
}

BlockComparison compare_central(const TwoModeOperator& A, const TwoModeOperator& reference, int dim, int margin) {
  if (A.rows() != dim * dim || reference.rows() != dim * dim || A.cols() != A.rows() || reference.cols() != reference.rows())
    throw std::invalid_argument("compare_central: dimension mismatch");
  BlockComparison c;
  c.block = std::max(0, dim - margin);
  double diff2 = 0.0, ref2 = 0.0;
  for (int n = 0; n < c.block; ++n)
    for (int m = 0; m < c.block; ++m)
      for (int np = 0; np < c.block; ++np)
        for (int mp = 0; mp < c.block; ++mp) {
          const int i = n * dim + m, j = np * dim + mp;
          const double d = std::abs(A(i, j) - reference(i, j));
          c.abs_error = std::max(c.abs_error, d);
          diff2 += d * d;
          ref2 += std::norm(reference(i, j));
        }
  c.rel_error = ref2 > 0 ? std::sqrt(diff2 / ref2) : std::sqrt(diff2);
  return c;
}

TwoModeOperator spectral_function(int dim, const std::function<double(double)>& f, const RadialGrid& grid) {
  // <<nm|f|n'm'>> = 2 delta_{n-m, n'-m'} int dr r f(r) R_nm(r) R_n'm'(r), D_nm(r e^{i theta}) = e^{i(n-m)theta} R_nm(r)
  const double R = std::sqrt(2.0 * dim) + grid.extra;
  const int panels = static_cast<int>(std::ceil(R / grid.panel));
  const QuadratureRule rule = composite_gauss_legendre(0.0, R, panels, grid.order);
  Eigen::MatrixXd radial(dim * dim, rule.size());
  for (Eigen::Index q = 0; q < rule.size(); ++q) {
    const double r = rule.nodes(q);
    const double w = 2.0 * rule.weights(q) * r * f(r);
    if (!std::isfinite(w) || w < 0) throw NumericError("spectral_function: f must be finite and nonnegative on (0, R]");
    const Eigen::MatrixXd D = displacement(cplx(r, 0.0), dim).real();
    for (int n = 0; n < dim; ++n)
      for (int m = 0; m < dim; ++m) radial(n * dim + m, q) = std::sqrt(w) * D(n, m);
  }
  return phase_averaged_frame(dim, radial);
}

TwoModeOperator spectral_function_truncated(int dim, int big_dim, const std::function<double(double)>& f) {
  if (big_dim < dim) throw std::invalid_argument("spectral_function_truncated: big_dim < dim");
  const Eigen::MatrixXcd a = ladder(big_dim);
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(big_dim, big_dim);
  const TwoModeOperator Z = kron(a, I) - kron(I, a.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Z.adjoint() * Z);
  Eigen::VectorXd fv(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < fv.size(); ++i) fv(i) = f(std::sqrt(std::max(es.eigenvalues()(i), 1e-14)));
  const TwoModeOperator full = es.eigenvectors() * fv.asDiagonal() * es.eigenvectors().adjoint();
  TwoModeOperator out(dim * dim, dim * dim);
  for (int n = 0; n < dim; ++n)
    for (int m = 0; m < dim; ++m)
      for (int np = 0; np < dim; ++np)
        for (int mp = 0; mp < dim; ++mp) out(n * dim + m, np * dim + mp) = full(n * big_dim + m, np * big_dim + mp);
  return out;
}

TwoModeOperator frame_operator_quadrature(int dim, const FrameGrid& grid) {
  const double L = grid.half_width > 0 ? grid.half_width : default_half_width(dim);
  const QuadratureRule xs = composite_gauss_legendre(-L, L, grid.x_panels, grid.x_order);
  return phase_grid_frame(dim, product_table(dim, xs.nodes), xs.weights, grid.phi_nodes);
}

FrameCheckReport quadrature_frame_check(int dim, double tol) {
  FrameCheckReport rep;
  rep.name = "quadrature";
  const TwoModeOperator F = frame_operator_quadrature(dim);
  const TwoModeOperator S = spectral_function(dim, [](double t) { return 1.0 / (kPi * t); });
  const BlockComparison c = compare_central(F, S, dim, 4);
  rep.metrics.push_back({"frame_vs_spectral_rel", c.rel_error});
  rep.metrics.push_back({"frame_vs_spectral_abs", c.abs_error});

  const double FI = (F * vectorize(Eigen::MatrixXcd::Identity(dim, dim))).norm();
  rep.metrics.push_back({"F_identity_norm", FI});

  // F F^{-1} with F^{-1} = pi |a - b^dag|; the intermediate sum runs over a much larger space.
  const double inv_err = sector_product_error(dim, 4, 160, [](double t) { return 1.0 / (kPi * t); },
                                              [](double t) { return kPi * t; });
  rep.metrics.push_back({"F_Finv_identity_abs", inv_err});

  rep.passed = std::isfinite(FI) && c.rel_error < tol && inv_err < tol;
  rep.note = "spectral path: resolution over |D(z)>> with exact displacement elements";
  return rep;
}

// ---- window frames --------------------------------------------------------------

double FrameKernelSpec::h(double y) const {
  switch (family) {
    case Family::Gaussian: return std::sqrt(2.0 * kPi) * std::exp(-y * y / (sigma * sigma));
    case Family::Delta: throw std::logic_error("delta window has no pointwise values");
    case Family::Tabulated: {
      if (grid.empty() || y < grid.front() || y > grid.back()) return 0.0;
      const auto it = std::upper_bound(grid.begin(), grid.end(), y);
      if (it == grid.end()) return values.back();
      const std::size_t i = static_cast<std::size_t>(it - grid.begin()) - 1;
      const double t = (y - grid[i]) / (grid[i + 1] - grid[i]);
      return (1 - t) * values[i] + t * values[i + 1];
    }
  }
  return 0.0;
}

cplx FrameKernelSpec::transform(double k) const {
  switch (family) {
    case Family::Gaussian: return std::sqrt(2.0 * kPi) * sigma * std::sqrt(kPi) * std::exp(-sigma * sigma * k * k / 4.0);
    case Family::Delta: return 1.0;
    case Family::Tabulated: {
      const QuadratureRule gl = gauss_legendre(8, 0.0, 1.0);
      cplx acc = 0.0;
      for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double a = grid[i], b = grid[i + 1];
        for (Eigen::Index q = 0; q < gl.size(); ++q) {
          const double y = a + (b - a) * gl.nodes(q);
          const double hv = (1 - gl.nodes(q)) * values[i] + gl.nodes(q) * values[i + 1];
          acc += (b - a) * gl.weights(q) * hv * std::polar(1.0, -k * y);
        }
      }
      return acc;
    }
  }
  return 0.0;
}

double FrameKernelSpec::t_times_f(double t) const { return std::norm(transform(2.0 * t)) / kPi; }

cplx FrameKernelSpec::dual_transform(double k) const { return kPi * std::abs(k) / (2.0 * std::conj(transform(k))); }

std::string FrameKernelSpec::describe() const {
  std::ostringstream os;
  switch (family) {
    case Family::Gaussian: os << "gaussian:" << sigma; break;
    case Family::Delta: os << "delta"; break;
    case Family::Tabulated: os << "tabulated[" << grid.size() << "]"; break;
  }
  return os.str();
}

TwoModeOperator window_frame_operator(const FrameKernelSpec& spec, int dim, const FrameGrid& grid) {
  using Family = FrameKernelSpec::Family;
  if (spec.family == Family::Delta) return frame_operator_quadrature(dim, grid);
  if (spec.family == Family::Gaussian && !(spec.sigma > 0)) throw ConfigError("Gaussian window needs sigma > 0");
  if (spec.family == Family::Tabulated &&
      (spec.grid.size() < 2 || spec.grid.size() != spec.values.size() || !std::is_sorted(spec.grid.begin(), spec.grid.end())))
    throw ConfigError("tabulated window needs an increasing grid with matching values");
  const double Ly = default_half_width(dim);
  const double reach = spec.family == Family::Gaussian ? 6.5 * spec.sigma
                                                       : std::max(std::abs(spec.grid.front()), std::abs(spec.grid.back()));
  const double L = grid.half_width > 0 ? grid.half_width : Ly + reach;
  const QuadratureRule ys = composite_gauss_legendre(-Ly, Ly, 160, 8);
  const QuadratureRule xs = composite_gauss_legendre(-L, L, grid.x_panels, grid.x_order);
  const Eigen::MatrixXd P = product_table(dim, ys.nodes);
  Eigen::MatrixXd H(ys.size(), xs.size());
  for (Eigen::Index i = 0; i < ys.size(); ++i)
    for (Eigen::Index j = 0; j < xs.size(); ++j) H(i, j) = ys.weights(i) * spec.h(ys.nodes(i) - xs.nodes(j));
  const Eigen::MatrixXd radial = P * H;  // Xi_jl(x) = int dy h(y - x) psi_j psi_l
  return phase_grid_frame(dim, radial, xs.weights, grid.phi_nodes);
}

FrameCheckReport generate_frame(const FrameKernelSpec& spec, int dim, double tol) {
  // Admissibility: the transform may not vanish on the band probed by the truncated space.
  const double tmax = std::sqrt(2.0 * dim) + 3.0;
  double prev = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const cplx v = spec.transform(2.0 * tmax * i / 2000);
    const double s = std::abs(v.imag()) < 1e-12 * std::abs(v) ? v.real() : std::abs(v);
    if (s == 0.0 || (i > 0 && s * prev < 0)) throw ConfigError("window " + spec.describe() + " is not admissible: its transform vanishes");
    prev = s;
  }
  FrameCheckReport rep;
  rep.name = "generate:" + spec.describe();
  const TwoModeOperator F = window_frame_operator(spec, dim);
  const TwoModeOperator S = spectral_function(dim, [&](double t) { return spec.t_times_f(t) / t; });
  const BlockComparison c = compare_central(F, S, dim);
  rep.metrics.push_back({"frame_vs_spectral_rel", c.rel_error});
  rep.metrics.push_back({"frame_vs_spectral_abs", c.abs_error});

  // The dual window generates the inverse frame operator: f_dual(t) f(t) = 1 on the band.
  double dual_gap = 0.0;
  for (int i = 1; i <= 200; ++i) {
    const double t = tmax * i / 200;
    const double f_dual = std::norm(spec.dual_transform(2.0 * t)) / (kPi * t);
    dual_gap = std::max(dual_gap, std::abs(f_dual * spec.t_times_f(t) / t - 1.0));
  }
  rep.metrics.push_back({"dual_window_inverse_gap", dual_gap});
  rep.passed = c.rel_error < tol && dual_gap < 1e-10;
  rep.note = "f(t) = |F^{-1}[h](2t)|^2 / (pi t); dual window pi|k| / (2 conj F^{-1}[h](k))";
  return rep;
}

// ---- double commutator -------------------------------------------------------------

Eigen::MatrixXcd double_commutator(const Eigen::MatrixXcd& A) {
  const Eigen::MatrixXcd a = ladder(static_cast<int>(A.rows()));
  const Eigen::MatrixXcd inner = a * A - A * a;
  return a.adjoint() * inner - inner * a.adjoint();
}

Eigen::MatrixXcd lindblad_form(const Eigen::MatrixXcd& A) {
  const Eigen::MatrixXcd a = ladder(static_cast<int>(A.rows()));
  auto L = [&](const Eigen::MatrixXcd& W) -> Eigen::MatrixXcd {
    const Eigen::MatrixXcd WdW = W.adjoint() * W;
    return W.adjoint() * A * W - 0.5 * (WdW * A + A * WdW);
  };
  return -(L(a) + L(a.adjoint()));
}

FrameCheckReport double_commutator_check(int dim, std::uint64_t seed) {
  FrameCheckReport rep;
  rep.name = "double_commutator";
  std::mt19937_64 g(seed);
  std::normal_distribution<double> nd;
  Eigen::MatrixXcd A(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) A(i, j) = cplx(nd(g), nd(g));
  const int c = dim - 2;
  auto central = [&](const Eigen::MatrixXcd& M) { return M.topLeftCorner(c, c).cwiseAbs().maxCoeff(); };

  const Eigen::MatrixXcd dc = double_commutator(A);
  rep.metrics.push_back({"commutator_vs_lindblad", central(dc - lindblad_form(A))});

  const Eigen::MatrixXcd a = ladder(dim);
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(dim, dim);
  // (I (x) B)|A>> = |A B^T>>, so b^dag acts as right multiplication by a.
  const TwoModeOperator Z = kron(a, I) - kron(I, a.adjoint());
  const Eigen::MatrixXcd viaZ = devectorize(Z.adjoint() * Z * vectorize(A), dim);
  rep.metrics.push_back({"Zsquared_vs_commutator", central(viaZ - dc)});

  rep.metrics.push_back({"identity_residual", central(double_commutator(I))});
  rep.metrics.push_back({"a_residual", central(double_commutator(a))});
  Eigen::MatrixXcd P0 = Eigen::MatrixXcd::Zero(dim, dim);
  P0(0, 0) = 1.0;
  Eigen::MatrixXcd expect = P0;
  expect(1, 1) = -1.0;
  rep.metrics.push_back({"vacuum_projector_residual", central(double_commutator(P0) - expect)});

  double worst = 0.0;
  for (const auto& [k, v] : rep.metrics) worst = std::max(worst, v);
  rep.passed = worst < 1e-10;
  rep.note = "[a^dag,[a,a]] = 0 and [a^dag,[a,|0><0|]] = |0><0| - |1><1| on the central block";
  return rep;
}

// ---- other frames --------------------------------------------------------------------

TwoModeOperator other_frame_operator(OtherFamily family, int dim, int nmax, const FrameGrid& grid) {
  if (nmax < 0) throw std::invalid_argument("other_frame_operator: nmax < 0");
  const double L = grid.half_width > 0 ? grid.half_width : default_half_width(dim) + 0.5 * std::sqrt(static_cast<double>(nmax));
  const QuadratureRule ys = composite_gauss_legendre(-L, L, 4 * grid.x_panels, grid.x_order);
  const Eigen::MatrixXd P = product_table(dim, ys.nodes);
  Eigen::MatrixXd W(ys.size(), nmax + 1);  // weighted window functions w_n(y)
  for (Eigen::Index q = 0; q < ys.size(); ++q) {
    const double y = ys.nodes(q);
    switch (family) {
      case OtherFamily::A: {
        double v = std::exp(-0.5 * y * y);
        for (int n = 0; n <= nmax; ++n, v *= y) W(q, n) = v;
        break;
      }
      case OtherFamily::B: W.row(q) = quadrature_wavefunctions(nmax, y).transpose(); break;
      case OtherFamily::ARescaled: {
        double v = std::pow(kPi, 0.25) * std::exp(-y * y);
        for (int n = 0; n <= nmax; ++n) {
          if (n > 0) v *= std::sqrt(2.0) * y / std::sqrt(static_cast<double>(n));
          W(q, n) = v;
        }
        break;
      }
    }
    W.row(q) *= ys.weights(q);
  }
  return phase_averaged_frame(dim, P * W);
}

FrameCheckReport other_frames_check(int dim, double tol) {
  FrameCheckReport rep;
  rep.name = "other";
  const TwoModeOperator inv = spectral_function(dim, [](double t) { return 1.0 / (kPi * t); });
  const TwoModeOperator gauss = spectral_function(dim, [](double t) { return std::exp(-t * t) / t; });

  const double b = compare_central(other_frame_operator(OtherFamily::B, dim, 80), inv, dim).rel_error;
  rep.metrics.push_back({"B_vs_inv_pi_Z_rel", b});

  double a_prev = 0.0, a_last = 0.0;
  bool a_growing = true;
  for (int nmax : {8, 16, 32, 64}) {
    a_last = compare_central(other_frame_operator(OtherFamily::A, dim, nmax), gauss, dim).rel_error;
    rep.metrics.push_back({"A_as_printed_rel_nmax" + std::to_string(nmax), a_last});
    a_growing = a_growing && a_last > a_prev;
    a_prev = a_last;
  }
  const double ar = compare_central(other_frame_operator(OtherFamily::ARescaled, dim, 160), gauss, dim).rel_error;
  rep.metrics.push_back({"A_rescaled_rel", ar});

  rep.passed = b < tol && a_last < tol;
  std::ostringstream note;
  note << "B family matches 1/(pi|Z|). ";
  if (a_last >= tol)
    note << "A family as printed (e^{-X^2/2} X^n) has partial frame sums that "
         << (a_growing ? "grow without bound" : "do not converge to e^{-|Z|^2}/|Z|")
         << "; the rescaled family pi^{1/4} e^{-X^2} (sqrt2 X)^n / sqrt(n!) reproduces e^{-|Z|^2}/|Z| (rel "
         << ar << ").";
  rep.note = note.str();
  return rep;
}

}  // namespace homotomo
