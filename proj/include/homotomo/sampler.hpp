#pragma once

// Monte Carlo homodyne data: (phi, x) records drawn from p(x|phi) by inverse CDF,
// with optional efficiency smearing.

#include "homotomo/fock.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace homotomo {

struct QuadratureRecord {
  double phi = 0.0;
  double x = 0.0;
  double eta = 1.0;
};

enum class PhaseScheme { UniformRandom, Grid };

struct SampleSpec {
  Eigen::MatrixXcd rho;
  std::size_t count = 0;
  PhaseScheme scheme = PhaseScheme::UniformRandom;
  int grid_points = 1;  // phases pi j / grid_points for the grid scheme
  double eta = 1.0;
  std::uint64_t seed = 0;
  std::size_t chunk_size = 1 << 16;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// CDF tables C_d(x) = int_{-L}^x c_d for every phase harmonic d, on a uniform grid.
class QuadratureTable {
 public:
  explicit QuadratureTable(const Eigen::MatrixXcd& rho, double spacing = 0.01);

  double half_width() const { return L_; }
  double cdf(double x, double phi) const;
  double pdf(double x, double phi) const;
  /// x with F(x|phi) = u, by bisection over the grid and cubic Hermite inversion.
  double inverse_cdf(double u, double phi) const;

 private:
  double cdf_node(int i, const Eigen::VectorXcd& phases) const;
  double pdf_node(int i, const Eigen::VectorXcd& phases) const;
  Eigen::VectorXcd phase_vector(double phi) const;

  Eigen::MatrixXcd rho_;
  double L_ = 0.0, h_ = 0.0;
  int dim_ = 0;
  Eigen::MatrixXcd cum_;   // nodes x harmonics
  Eigen::MatrixXcd dens_;  // nodes x harmonics
};

/// Deterministic per-chunk RNG: mt19937_64 seeded by SplitMix64 of (seed, chunk).
std::mt19937_64 chunk_engine(std::uint64_t seed, std::uint64_t chunk);
double uniform_open(std::mt19937_64& g);  // in (0, 1)
double standard_normal(std::mt19937_64& g);

std::vector<QuadratureRecord> sample(const SampleSpec& spec);

struct KsBin {
  double phi_lo = 0.0, phi_hi = 0.0;
  std::size_t n = 0;          // records in the bin
  std::size_t evaluated = 0;  // records used for the statistic
  double distance = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

struct GoodnessReport {
  std::vector<KsBin> bins;
  bool passed = false;
};

struct GoodnessOptions {
  int bins = 8;
  std::size_t min_per_bin = 50;
  std::size_t max_eval_per_bin = 50000;  // subsampling cap for the smeared CDF
  double ks_coefficient = 1.95;          // threshold = coefficient / sqrt(n)
};

/// Kolmogorov-Smirnov test of the records in each phi-bin against the eta-smeared pdf.
GoodnessReport empirical_check(const std::vector<QuadratureRecord>& records, const Eigen::MatrixXcd& rho, double eta,
                               const GoodnessOptions& opts = {});

}  // namespace homotomo
