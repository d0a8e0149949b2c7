// homotomo command line: verify | sample | estimate | pipeline | frames | spin.
// Flags override keys of the matching [section] in the --config INI file.

#include "homotomo/app.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace homotomo::app;

namespace {

struct Flags {
  std::map<std::string, std::string> values;

  void add(CLI::App* cmd, const std::string& flag, const std::string& key, const std::string& help) {
    cmd->add_option_function<std::string>(flag, [this, key](const std::string& v) { values[key] = v; }, help);
  }
  void add_list(CLI::App* cmd, const std::string& flag, const std::string& key, const std::string& help) {
    cmd->add_option_function<std::vector<std::string>>(
        flag,
        [this, key](const std::vector<std::string>& v) {
          std::string joined;
          for (const auto& s : v) joined += (joined.empty() ? "" : ";") + s;
          values[key] = joined;
        },
        help);
  }
};

void add_sample_flags(Flags& f, CLI::App* cmd) {
  f.add(cmd, "--state", "state", "fock:n | coherent:re,im | thermal:nbar | matrix.json");
  f.add(cmd, "--cutoff", "cutoff", "Fock cutoff N (dimension N + 1)");
  f.add(cmd, "--count", "count", "number of records");
  f.add(cmd, "--eta", "eta", "detector efficiency in (0, 1]");
  f.add(cmd, "--seed", "seed", "RNG seed");
  f.add(cmd, "--phases", "phases", "random | grid:N");
  f.add(cmd, "--threads", "threads", "worker threads (0: all cores)");
  f.add(cmd, "--max-deficit", "max_deficit", "largest truncation deficit accepted for the state");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Homodyne tomography workbench"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path, report_path;
  bool quiet = false;
  app.add_option("--config", config_path, "INI file with one [section] per subcommand");
  app.add_option("--report", report_path, "write the JSON report here instead of stdout");
  app.add_flag("--quiet", quiet, "suppress the summary table on stderr");

  Flags flags;
  CLI::App* verify = app.add_subcommand("verify", "exact operator-identity suite");
  flags.add(verify, "--only", "only", "run a single identity, e.g. RICHTER");
  flags.add(verify, "--degree", "degree", "set every index limit to this value");

  CLI::App* sample = app.add_subcommand("sample", "simulate homodyne records to CSV");
  add_sample_flags(flags, sample);
  flags.add(sample, "--out", "output", "CSV path (sidecar written to PATH.json)");

  CLI::App* estimate = app.add_subcommand("estimate", "average pattern functions over a CSV of records");
  flags.add(estimate, "--input", "input", "CSV written by sample");
  flags.add_list(estimate, "--kernel", "kernels", "kernel descriptor, repeatable (moment:n,m dyad:n,d disp:re,im dual:n,m,order g:n,m a num)");
  flags.add(estimate, "--eta", "eta", "efficiency to unbias for (default: from the records)");
  flags.add(estimate, "--threads", "threads", "worker threads");

  CLI::App* pipeline = app.add_subcommand("pipeline", "sample, estimate and compare with exact expectations");
  add_sample_flags(flags, pipeline);
  flags.add_list(pipeline, "--kernel", "kernels", "kernel descriptor, repeatable");
  flags.add(pipeline, "--out-dir", "out_dir", "directory for samples.csv and report.json");
  flags.add(pipeline, "--z-max", "z_max", "pass threshold in standard errors");

  CLI::App* frames = app.add_subcommand("frames", "frame-operator checks");
  flags.add_list(frames, "--check", "checks",
                 "quadrature | moments | swap | generate:SIGMA | generate:delta | other | dual | double_commutator | alternate");
  flags.add(frames, "--dim", "dim", "truncated dimension for the grid checks");
  flags.add(frames, "--moments-dim", "moments_dim", "dimension for the moments frame");
  flags.add(frames, "--swap-dim", "swap_dim", "dimension for the swap reconstruction");
  flags.add(frames, "--dual-dim", "dual_dim", "dimension for the canonical-dual check");
  flags.add(frames, "--aux", "aux", "auxiliary basis size for alternate expansions");
  flags.add(frames, "--tol", "tol", "relative tolerance for the two-path comparisons");

  CLI::App* spin = app.add_subcommand("spin", "spin-J swap reconstruction and estimation demo");
  flags.add(spin, "--J", "J", "spin (half-integer)");
  flags.add(spin, "--shots", "shots", "simulated measurements per case");
  flags.add(spin, "--seed", "seed", "RNG seed");
  flags.add(spin, "--order", "order", "starting quadrature order");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kConfigFailure;
  }

  try {
    const Tree config = config_path.empty() ? Tree{} : load_config(config_path);
    CLI::App* cmd = app.get_subcommands().front();
    const Tree t = with_overrides(section(config, cmd->get_name()), flags.values);
    RunResult r;
    if (cmd == verify) r = run_verify(VerifyParams::from(t));
    if (cmd == sample) r = run_sample(SampleParams::from(t));
    if (cmd == estimate) r = run_estimate(EstimateParams::from(t));
    if (cmd == pipeline) r = run_pipeline(PipelineParams::from(t));
    if (cmd == frames) r = run_frames(FramesParams::from(t));
    if (cmd == spin) r = run_spin(SpinParams::from(t));

    if (report_path.empty())
      std::cout << r.report.dump(2) << '\n';
    else
      write_json(report_path, r.report);
    if (!quiet && !r.summary.empty()) std::cerr << r.summary;
    return r.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}
