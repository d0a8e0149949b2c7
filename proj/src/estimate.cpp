#include "homotomo/estimators.hpp"

#include "homotomo/errors.hpp"
#include "homotomo/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <numbers>
#include <thread>

namespace homotomo {
namespace {

constexpr double kPi = std::numbers::pi;

unsigned pick_threads(unsigned requested, std::size_t work) {
  unsigned t = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(t, work / 4096 + 1)));
}

template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& body) {
  if (threads <= 1) {
    body(0, n);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  const std::size_t step = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t lo = t * step, hi = std::min(n, lo + step);
    if (lo < hi)
      pool.emplace_back([&, t, lo, hi] {
        try {
          body(lo, hi);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

struct Moments {
  double mean = 0.0, var = 0.0;  // var: unbiased sample variance
};

Moments moments(const std::vector<double>& v) {
  Moments r;
  const std::size_t n = v.size();
  r.mean = pairwise_sum(v.data(), n) / n;
  if (n < 2) return r;
  std::vector<double> dev(n);
  for (std::size_t i = 0; i < n; ++i) dev[i] = (v[i] - r.mean) * (v[i] - r.mean);
  r.var = pairwise_sum(dev.data(), n) / (n - 1);
  return r;
}

// Smallest L beyond which every phase harmonic of the state is negligible.
double state_half_width(const Eigen::MatrixXcd& rho) {
  auto env = [&](double x) {
    const Eigen::VectorXcd c = pdf_harmonics(rho, x);
    double e = std::abs(c(0));
    for (int d = 1; d < c.size(); ++d) e += 2.0 * std::abs(c(d));
    return e;
  };
  double L = 3.0;
  while (std::max(env(L), env(-L)) > 1e-17) {
    L += 0.25;
    if (L > 60.0) throw NumericError("integrate_kernel: state support too wide");
  }
  return L;
}

}  // namespace

double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

EstimateReport estimate(const std::vector<QuadratureRecord>& records, const EstimatorKernel& kernel, unsigned threads) {
  if (records.empty()) throw NumericError("estimate: no records");
  for (const auto& r : records)
    if (std::abs(r.eta - kernel.eta) > 1e-12)
      throw ConfigError("estimate: records taken at eta = " + std::to_string(r.eta) + " but kernel expects eta = " +
                        std::to_string(kernel.eta));
  const KernelEvaluator f(kernel);
  const std::size_t n = records.size();
  std::vector<double> re(n), im(n), err(n);
  parallel_for(n, pick_threads(threads, n), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const cplx v = f(records[i].x, records[i].phi);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw NumericError("estimate: kernel not finite at x = " + std::to_string(records[i].x));
      re[i] = v.real();
      im[i] = v.imag();
      err[i] = f.extrapolation_error(records[i].x);
    }
  });

  EstimateReport rep;
  rep.n = n;
  rep.kernel = kernel.describe();
  rep.extrapolation_error = pairwise_sum(err.data(), n) / n;

  // Phases drawn from a small grid: stratified mean over the distinct phases.
  std::map<double, std::vector<std::size_t>> strata;
  for (std::size_t i = 0; i < n && strata.size() <= 4096; ++i) strata[records[i].phi].push_back(i);
  bool stratify = strata.size() > 1 && strata.size() <= 4096 && strata.size() * 2 <= n;
  if (stratify)
    for (const auto& [phi, idx] : strata) stratify = stratify && idx.size() >= 2;

  if (!stratify) {
    const Moments mr = moments(re), mi = moments(im);
    rep.value = {mr.mean, mi.mean};
    rep.stderr_re = std::sqrt(mr.var / n);
    rep.stderr_im = std::sqrt(mi.var / n);
    return rep;
  }
  rep.stratified = true;
  std::vector<double> mre, mim, vre, vim;
  for (const auto& [phi, idx] : strata) {
    std::vector<double> a(idx.size()), b(idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j) {
      a[j] = re[idx[j]];
      b[j] = im[idx[j]];
    }
    const Moments ma = moments(a), mb = moments(b);
    mre.push_back(ma.mean);
    mim.push_back(mb.mean);
    vre.push_back(ma.var / idx.size());
    vim.push_back(mb.var / idx.size());
  }
  const double H = static_cast<double>(strata.size());
  rep.value = {pairwise_sum(mre.data(), mre.size()) / H, pairwise_sum(mim.data(), mim.size()) / H};
  rep.stderr_re = std::sqrt(pairwise_sum(vre.data(), vre.size())) / H;
  rep.stderr_im = std::sqrt(pairwise_sum(vim.data(), vim.size())) / H;
  return rep;
}

cplx integrate_kernel(const Eigen::MatrixXcd& rho, const KernelEvaluator& f, double eta,
                      const IntegrationOptions& opts) {
  if (!(eta > 0.0 && eta <= 1.0)) throw ConfigError("efficiency must lie in (0, 1]");
  const double sigma = std::sqrt((1.0 - eta) / (4.0 * eta));
  const double L = opts.half_width > 0 ? opts.half_width : state_half_width(rho) + 9.0 * sigma;
  const QuadratureRule xs = composite_gauss_legendre(-L, L, opts.x_panels, opts.x_order);
  const QuadratureRule phis = periodic_trapezoid(opts.phi_nodes, 0.0, kPi);
  const QuadratureRule gh = gauss_hermite(40);
  const int dim = static_cast<int>(rho.rows());

  // Phase harmonics of the (smeared) pdf at every x node.
  Eigen::MatrixXcd harm(xs.size(), dim);
  for (Eigen::Index i = 0; i < xs.size(); ++i) {
    if (sigma == 0.0) {
      harm.row(i) = pdf_harmonics(rho, xs.nodes(i)).transpose();
      continue;
    }
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(dim);
    for (Eigen::Index q = 0; q < gh.size(); ++q)
      acc += gh.weights(q) * pdf_harmonics(rho, xs.nodes(i) - sigma * std::sqrt(2.0) * gh.nodes(q));
    harm.row(i) = acc.transpose() / std::sqrt(kPi);
  }

  cplx total = 0.0;
  for (Eigen::Index p = 0; p < phis.size(); ++p) {
    const double phi = phis.nodes(p);
    Eigen::VectorXcd ph(dim);
    for (int d = 0; d < dim; ++d) ph(d) = d == 0 ? cplx(1.0) : 2.0 * std::polar(1.0, d * phi);
    cplx inner = 0.0;
    for (Eigen::Index i = 0; i < xs.size(); ++i) {
      const double pdf = (harm.row(i) * ph)(0).real();
      inner += xs.weights(i) * pdf * f(xs.nodes(i), phi);
    }
    total += phis.weights(p) * inner;
  }
  return total / kPi;
}

PauliDemoReport pauli_demo(double p, const Eigen::Vector3d& bloch, std::size_t shots, std::uint64_t seed) {
  if (!(p >= 0.0 && p < 1.0)) throw ConfigError("depolarizing parameter must lie in [0, 1)");
  if (bloch.norm() > 1.0 + 1e-12) throw ConfigError("Bloch vector outside the unit ball");
  if (shots < 2) throw ConfigError("need at least two shots per axis");
  PauliDemoReport rep;
  rep.bloch_true = bloch;
  rep.shots_per_axis = shots;
  rep.p = p;
  // The channel shrinks the Bloch vector by (1 - p); the inverse map rescales each outcome by 1 / (1 - p).
  for (int axis = 0; axis < 3; ++axis) {
    std::mt19937_64 g = chunk_engine(seed, axis);
    const double prob_up = 0.5 * (1.0 + (1.0 - p) * bloch(axis));
    std::vector<double> v(shots);
    for (auto& s : v) s = (uniform_open(g) < prob_up ? 1.0 : -1.0) / (1.0 - p);
    const Moments mo = moments(v);
    rep.estimate(axis) = mo.mean;
    rep.stderr_(axis) = std::sqrt(mo.var / shots);
  }
  return rep;
}

}  // namespace homotomo
