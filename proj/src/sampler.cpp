#include "homotomo/sampler.hpp"

#include "homotomo/errors.hpp"
#include "homotomo/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

namespace homotomo {
namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double envelope(const Eigen::MatrixXcd& rho, double x) {
  const Eigen::VectorXcd c = pdf_harmonics(rho, x);
  double e = std::abs(c(0));
  for (int d = 1; d < c.size(); ++d) e += 2.0 * std::abs(c(d));
  return e;
}

/// Cubic Hermite on [0,1] with values f0, f1 and slopes m0, m1 (already scaled by h).
double hermite_cubic(double t, double f0, double f1, double m0, double m1) {
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * f1 + (t3 - t2) * m1;
}

double hermite_cubic_slope(double t, double f0, double f1, double m0, double m1) {
  const double t2 = t * t;
  return (6 * t2 - 6 * t) * f0 + (3 * t2 - 4 * t + 1) * m0 + (-6 * t2 + 6 * t) * f1 + (3 * t2 - 2 * t) * m1;
}

}  // namespace

QuadratureTable::QuadratureTable(const Eigen::MatrixXcd& rho, double spacing) : rho_(rho) {
  dim_ = static_cast<int>(rho.rows());
  if (dim_ < 1 || rho.cols() != dim_) throw NumericError("QuadratureTable: bad density matrix");
  L_ = 3.0;
  while (std::max(envelope(rho, L_), envelope(rho, -L_)) > 1e-14) {
    L_ += 0.5;
    if (L_ > 60.0) throw NumericError("QuadratureTable: support does not fit the tabulation range");
  }
  const int cells = static_cast<int>(std::ceil(2.0 * L_ / spacing));
  h_ = 2.0 * L_ / cells;
  cum_ = Eigen::MatrixXcd::Zero(cells + 1, dim_);
  dens_ = Eigen::MatrixXcd::Zero(cells + 1, dim_);
  const QuadratureRule gl = gauss_legendre(6, 0.0, h_);
  for (int i = 0; i <= cells; ++i) {
    const double x = -L_ + i * h_;
    dens_.row(i) = pdf_harmonics(rho, x).transpose();
    if (i == cells) break;
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(dim_);
    for (Eigen::Index q = 0; q < gl.size(); ++q) acc += gl.weights(q) * pdf_harmonics(rho, x + gl.nodes(q));
    cum_.row(i + 1) = cum_.row(i) + acc.transpose();
  }
}

Eigen::VectorXcd QuadratureTable::phase_vector(double phi) const {
  Eigen::VectorXcd ph(dim_);
  for (int d = 0; d < dim_; ++d) ph(d) = d == 0 ? cplx(1.0) : 2.0 * std::polar(1.0, d * phi);
  return ph;
}

double QuadratureTable::cdf_node(int i, const Eigen::VectorXcd& ph) const { return (cum_.row(i) * ph)(0).real(); }

double QuadratureTable::pdf_node(int i, const Eigen::VectorXcd& ph) const { return (dens_.row(i) * ph)(0).real(); }

double QuadratureTable::pdf(double x, double phi) const { return quadrature_pdf(rho_, phi, x); }

double QuadratureTable::cdf(double x, double phi) const {
  if (x <= -L_) return 0.0;
  if (x >= L_) return 1.0;
  const Eigen::VectorXcd ph = phase_vector(phi);
  const int last = static_cast<int>(cum_.rows()) - 1;
  const double total = cdf_node(last, ph);
  const int i = std::min(static_cast<int>((x + L_) / h_), last - 1);
  const double t = (x - (-L_ + i * h_)) / h_;
  const double F = hermite_cubic(t, cdf_node(i, ph), cdf_node(i + 1, ph), h_ * pdf_node(i, ph), h_ * pdf_node(i + 1, ph));
  return std::clamp(F / total, 0.0, 1.0);
}

double QuadratureTable::inverse_cdf(double u, double phi) const {
  const Eigen::VectorXcd ph = phase_vector(phi);
  const int last = static_cast<int>(cum_.rows()) - 1;
  const double target = u * cdf_node(last, ph);
  int lo = 0, hi = last;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    (cdf_node(mid, ph) <= target ? lo : hi) = mid;
  }
  const double f0 = cdf_node(lo, ph), f1 = cdf_node(hi, ph);
  const double m0 = h_ * pdf_node(lo, ph), m1 = h_ * pdf_node(hi, ph);
  // Safeguarded Newton on the cubic, bracket [a, b] in t.
  double a = 0.0, b = 1.0;
  double t = f1 > f0 ? std::clamp((target - f0) / (f1 - f0), 0.0, 1.0) : 0.5;
  for (int iter = 0; iter < 60; ++iter) {
    const double g = hermite_cubic(t, f0, f1, m0, m1) - target;
    (g < 0 ? a : b) = t;
    const double slope = hermite_cubic_slope(t, f0, f1, m0, m1);
    double next = slope > 0 ? t - g / slope : 0.5 * (a + b);
    if (next <= a || next >= b) next = 0.5 * (a + b);
    if (std::abs(next - t) < 1e-15) {
      t = next;
      break;
    }
    t = next;
  }
  return -L_ + (lo + t) * h_;
}

std::mt19937_64 chunk_engine(std::uint64_t seed, std::uint64_t chunk) {
  std::uint64_t state = seed ^ (0xD1B54A32D192ED03ULL * (chunk + 1));
  splitmix64(state);
  return std::mt19937_64(splitmix64(state));
}

double uniform_open(std::mt19937_64& g) { return (static_cast<double>(g() >> 11) + 0.5) * 0x1.0p-53; }

double standard_normal(std::mt19937_64& g) {
  const double u1 = uniform_open(g), u2 = uniform_open(g);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

std::vector<QuadratureRecord> sample(const SampleSpec& spec) {
  if (spec.count < 1) throw ConfigError("sample count must be at least 1");
  if (!(spec.eta > 0.0 && spec.eta <= 1.0)) throw ConfigError("efficiency must lie in (0, 1]");
  if (spec.scheme == PhaseScheme::Grid && spec.grid_points < 1) throw ConfigError("phase grid needs at least one point");
  if (spec.chunk_size < 1) throw ConfigError("chunk size must be positive");
  const QuadratureTable table(spec.rho);
  const double sigma = std::sqrt((1.0 - spec.eta) / (4.0 * spec.eta));
  std::vector<QuadratureRecord> out(spec.count);
  const std::size_t chunks = (spec.count + spec.chunk_size - 1) / spec.chunk_size;

  auto run_chunk = [&](std::size_t c) {
    std::mt19937_64 g = chunk_engine(spec.seed, c);
    const std::size_t begin = c * spec.chunk_size, end = std::min(spec.count, begin + spec.chunk_size);
    for (std::size_t i = begin; i < end; ++i) {
      QuadratureRecord& r = out[i];
      r.phi = spec.scheme == PhaseScheme::Grid ? kPi * static_cast<double>(i % spec.grid_points) / spec.grid_points
                                               : kPi * static_cast<double>(g() >> 11) * 0x1.0p-53;
      r.x = table.inverse_cdf(uniform_open(g), r.phi);
      if (spec.eta < 1.0) r.x += sigma * standard_normal(g);
      r.eta = spec.eta;
    }
  };

  unsigned threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, chunks));
  if (threads <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t c = t; c < chunks; c += threads) run_chunk(c);
      });
    for (auto& th : pool) th.join();
  }
  return out;
}

GoodnessReport empirical_check(const std::vector<QuadratureRecord>& records, const Eigen::MatrixXcd& rho, double eta,
                               const GoodnessOptions& opts) {
  if (records.empty()) throw NumericError("empirical_check: no records");
  if (!(eta > 0.0 && eta <= 1.0)) throw ConfigError("efficiency must lie in (0, 1]");
  const QuadratureTable table(rho);
  const double sigma = std::sqrt((1.0 - eta) / (4.0 * eta));
  const QuadratureRule gh = gauss_hermite(40);

  std::vector<std::vector<std::size_t>> members(opts.bins);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const int b = std::clamp(static_cast<int>(records[i].phi / kPi * opts.bins), 0, opts.bins - 1);
    members[b].push_back(i);
  }

  GoodnessReport rep;
  rep.passed = true;
  for (int b = 0; b < opts.bins; ++b) {
    const auto& idx = members[b];
    KsBin bin;
    bin.phi_lo = kPi * b / opts.bins;
    bin.phi_hi = kPi * (b + 1) / opts.bins;
    bin.n = idx.size();
    if (idx.empty()) throw NumericError("empirical_check: empty phi-bin " + std::to_string(b));
    if (idx.size() < opts.min_per_bin) throw NumericError("empirical_check: too few samples in phi-bin " + std::to_string(b));
    const std::size_t stride = eta < 1.0 ? std::max<std::size_t>(1, idx.size() / opts.max_eval_per_bin) : 1;
    std::vector<double> u;
    for (std::size_t j = 0; j < idx.size(); j += stride) {
      const auto& r = records[idx[j]];
      if (eta >= 1.0) {
        u.push_back(table.cdf(r.x, r.phi));
      } else {
        // F_eta(x) = int F(x - sigma sqrt2 s) e^{-s^2} ds / sqrt(pi)
        double acc = 0.0;
        for (Eigen::Index q = 0; q < gh.size(); ++q)
          acc += gh.weights(q) * table.cdf(r.x - sigma * std::sqrt(2.0) * gh.nodes(q), r.phi);
        u.push_back(acc / std::sqrt(kPi));
      }
    }
    std::sort(u.begin(), u.end());
    const double n = static_cast<double>(u.size());
    double dmax = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
      dmax = std::max({dmax, (i + 1) / n - u[i], u[i] - i / n});
    bin.evaluated = u.size();
    bin.distance = dmax;
    bin.threshold = opts.ks_coefficient / std::sqrt(n);
    bin.passed = dmax < bin.threshold;
    rep.passed = rep.passed && bin.passed;
    rep.bins.push_back(bin);
  }
  return rep;
}

}  // namespace homotomo
