#pragma once

// Config-driven runners behind the homotomo command line. Every runner returns a JSON
// report {version, command, config, results[], passed, timing} and an exit code:
// 0 all checks pass, 1 check failure, 2 configuration or IO error, 3 numeric/resource error.

#include "homotomo/fock.hpp"
#include "homotomo/sampler.hpp"

#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include <exception>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace homotomo::app {

using nlohmann::json;
using Tree = boost::property_tree::ptree;

enum ExitCode : int { kPass = 0, kCheckFailure = 1, kConfigFailure = 2, kNumericFailure = 3 };

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string version();
int exit_code_for(const std::exception& e);

// ---- configuration ----------------------------------------------------------------

/// Reads an INI file; throws IoError if missing, ConfigError if malformed.
Tree load_config(const std::string& path);
/// The named section of a config, empty if absent.
Tree section(const Tree& config, const std::string& name);
/// Overlays key=value overrides (command-line flags) onto a section.
Tree with_overrides(Tree base, const std::map<std::string, std::string>& overrides);

struct SampleParams {
  std::string state = "coherent:0.8,0";
  int cutoff = 12;
  std::size_t count = 100000;
  double eta = 1.0;
  std::uint64_t seed = 1;
  std::string phases = "random";  // random | grid:N
  std::string output = "samples.csv";
  unsigned threads = 0;
  double max_deficit = 1e-6;

  static SampleParams from(const Tree& t);
  json to_json() const;
};

struct EstimateParams {
  std::string input = "samples.csv";
  std::vector<std::string> kernels{"moment:0,1", "moment:1,1"};
  double eta = 0.0;  // 0: taken from the records
  unsigned threads = 0;

  static EstimateParams from(const Tree& t);
  json to_json() const;
};

struct PipelineParams {
  SampleParams sample;
  std::vector<std::string> kernels{"moment:0,1", "moment:1,1", "dyad:0,0", "dyad:0,1", "disp:0.3,0"};
  std::string out_dir = "pipeline_out";
  double z_max = 4.0;

  static PipelineParams from(const Tree& t);
  json to_json() const;
};

struct VerifyParams {
  std::string only;  // identity name, empty for all
  int degree = 0;    // > 0: every index limit set to this value
  int main_k = 8, main_n = 8, richter = 10, symm = 8, s_order = 8, trunc_l = 4, trunc_n = 4, mu_nu = 8, resample = 6,
      poisson = 5, displacement_order = 8;

  static VerifyParams from(const Tree& t);
  json to_json() const;
};

struct FramesParams {
  std::vector<std::string> checks{"quadrature", "moments", "swap", "generate:1", "other", "dual", "double_commutator",
                                  "alternate"};
  int dim = 10;
  int moments_dim = 12;
  int swap_dim = 6;
  int dual_dim = 12;
  int aux = 60;
  double tol = 5e-3;

  static FramesParams from(const Tree& t);
  json to_json() const;
};

struct SpinParams {
  int two_j = 1;
  std::size_t shots = 100000;
  std::uint64_t seed = 1;
  int order = 2;

  static SpinParams from(const Tree& t);
  json to_json() const;
};

// ---- IO ----------------------------------------------------------------------------

/// fock:n, coherent:re,im, thermal:nbar, or a JSON file holding rows of [re, im] pairs.
DensityMatrix parse_state(const std::string& spec, int dim, double max_deficit = 1e-6);

/// Header phi,x,eta; 17 significant digits.
void write_csv(const std::string& path, const std::vector<QuadratureRecord>& records);
std::vector<QuadratureRecord> read_csv(const std::string& path);
void write_json(const std::string& path, const json& j);

// ---- runners -----------------------------------------------------------------------

struct RunResult {
  json report;
  int exit_code = kPass;
  std::string summary;  // human-readable table, may be empty
};

RunResult run_verify(const VerifyParams& p);
RunResult run_sample(const SampleParams& p);
RunResult run_estimate(const EstimateParams& p);
RunResult run_pipeline(const PipelineParams& p);
RunResult run_frames(const FramesParams& p);
RunResult run_spin(const SpinParams& p);

}  // namespace homotomo::app
