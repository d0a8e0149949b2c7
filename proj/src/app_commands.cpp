#include "homotomo/app.hpp"

#include "homotomo/errors.hpp"
#include "homotomo/estimators.hpp"
#include "homotomo/frames.hpp"
#include "homotomo/identities.hpp"
#include "homotomo/spintomo.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>

namespace homotomo::app {
namespace {

using Clock = std::chrono::steady_clock;

json envelope(const std::string& command, json config, json results, bool passed, Clock::time_point start) {
  json j;
  j["version"] = version();
  j["command"] = command;
  j["config"] = std::move(config);
  j["results"] = std::move(results);
  j["passed"] = passed;
  j["timing"] = {{"seconds", std::chrono::duration<double>(Clock::now() - start).count()}};
  return j;
}

json frame_json(const FrameCheckReport& r) {
  json m = json::object();
  for (const auto& [k, v] : r.metrics) m[k] = v;
  return {{"name", r.name}, {"passed", r.passed}, {"metrics", m}, {"note", r.note}};
}

SampleSpec make_spec(const SampleParams& p, const Eigen::MatrixXcd& rho) {
  SampleSpec s;
  s.rho = rho;
  s.count = p.count;
  s.eta = p.eta;
  s.seed = p.seed;
  s.threads = p.threads;
  if (p.phases == "random") {
    s.scheme = PhaseScheme::UniformRandom;
  } else {
    const std::string n = p.phases.substr(5);
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(n, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != n.size() || v < 1 || v > 100000) throw ConfigError("phases grid:N needs 1 <= N <= 100000");
    s.scheme = PhaseScheme::Grid;
    s.grid_points = v;
  }
  return s;
}

json estimate_json(const EstimateReport& r) {
  return {{"kernel", r.kernel},         {"value_re", r.value.real()},   {"value_im", r.value.imag()},
          {"stderr_re", r.stderr_re},   {"stderr_im", r.stderr_im},     {"n", r.n},
          {"stratified", r.stratified}, {"extrapolation_error", r.extrapolation_error}};
}

double common_eta(const std::vector<QuadratureRecord>& records) {
  if (records.empty()) throw ConfigError("no records in input");
  for (const auto& r : records)
    if (r.eta != records.front().eta) throw ConfigError("records mix several efficiencies; pass eta explicitly");
  return records.front().eta;
}

void write_samples(const std::string& path, const std::vector<QuadratureRecord>& records, const json& spec) {
  write_csv(path, records);
  json side = spec;
  side["version"] = version();
  side["records"] = records.size();
  side["columns"] = {"phi", "x", "eta"};
  write_json(path + ".json", side);
}

}  // namespace

RunResult run_verify(const VerifyParams& p) {
  const auto start = Clock::now();
  std::optional<IdentityId> only;
  if (!p.only.empty()) {
    only = parse_identity(p.only);
    if (!only) throw ConfigError("unknown identity '" + p.only + "'");
  }
  SuiteLimits lim;
  lim.main_k = p.main_k;
  lim.main_n = p.main_n;
  lim.richter = p.richter;
  lim.symm = p.symm;
  lim.s_order = p.s_order;
  lim.trunc_l = p.trunc_l;
  lim.trunc_n = p.trunc_n;
  lim.mu_nu = p.mu_nu;
  lim.resample = p.resample;
  lim.poisson = p.poisson;
  lim.displacement_order = p.displacement_order;
  const std::vector<IdentityReport> reports = run_identity_suite(lim, only);

  std::map<std::string, json> per_id;
  bool all = true;
  for (const auto& r : reports) {
    json& e = per_id[identity_name(r.id)];
    if (e.is_null()) e = {{"identity", identity_name(r.id)}, {"cases", 0}, {"failures", json::array()}};
    e["cases"] = e["cases"].get<int>() + 1;
    if (!r.passed) {
      all = false;
      e["failures"].push_back({{"params", r.params}, {"residual_terms", r.residual.size()}, {"note", r.note}});
    }
  }
  json results = json::array();
  std::ostringstream table;
  for (auto& [name, e] : per_id) {
    e["passed"] = e["failures"].empty();
    table << std::left << std::setw(22) << name << std::setw(8) << e["cases"].get<int>()
          << (e["passed"].get<bool>() ? "pass" : "FAIL") << '\n';
    results.push_back(e);
  }
  RunResult out;
  out.report = envelope("verify", p.to_json(), results, all, start);
  out.exit_code = all ? kPass : kCheckFailure;
  out.summary = table.str();
  return out;
}

RunResult run_sample(const SampleParams& p) {
  const auto start = Clock::now();
  const DensityMatrix st = parse_state(p.state, p.cutoff + 1, p.max_deficit);
  const std::vector<QuadratureRecord> records = sample(make_spec(p, st.rho));
  write_samples(p.output, records, p.to_json());
  json results = json::array();
  results.push_back({{"file", p.output}, {"sidecar", p.output + ".json"}, {"records", records.size()},
                     {"norm_deficit", st.norm_deficit}});
  RunResult out;
  out.report = envelope("sample", p.to_json(), results, true, start);
  return out;
}

RunResult run_estimate(const EstimateParams& p) {
  const auto start = Clock::now();
  const std::vector<QuadratureRecord> records = read_csv(p.input);
  const double eta = p.eta > 0 ? p.eta : common_eta(records);
  json results = json::array();
  for (const auto& text : p.kernels)
    results.push_back(estimate_json(estimate(records, EstimatorKernel::parse(text, eta), p.threads)));
  RunResult out;
  out.report = envelope("estimate", p.to_json(), results, true, start);
  return out;
}

RunResult run_pipeline(const PipelineParams& p) {
  const auto start = Clock::now();
  const int dim = p.sample.cutoff + 1;
  const DensityMatrix st = parse_state(p.sample.state, dim, p.sample.max_deficit);
  // Kernels are validated before any sampling work.
  std::vector<EstimatorKernel> kernels;
  for (const auto& text : p.kernels) kernels.push_back(EstimatorKernel::parse(text, p.sample.eta));

  std::filesystem::create_directories(p.out_dir);
  const std::string csv = (std::filesystem::path(p.out_dir) / "samples.csv").string();
  write_samples(csv, sample(make_spec(p.sample, st.rho)), p.to_json());
  const std::vector<QuadratureRecord> records = read_csv(csv);

  json results = json::array();
  bool all = true;
  std::ostringstream table;
  table << std::left << std::setw(22) << "kernel" << std::setw(26) << "estimate" << std::setw(26) << "exact"
        << std::setw(10) << "z" << "result\n";
  for (const auto& k : kernels) {
    const EstimateReport r = estimate(records, k, p.sample.threads);
    const cplx exact = expectation(st.rho, k.target_operator(dim));
    const double slack = r.extrapolation_error + 1e-12;
    const double dre = std::abs(r.value.real() - exact.real()), dimag = std::abs(r.value.imag() - exact.imag());
    const bool ok = dre <= p.z_max * r.stderr_re + slack && dimag <= p.z_max * r.stderr_im + slack;
    const double z = std::max(r.stderr_re > 0 ? dre / r.stderr_re : 0.0, r.stderr_im > 0 ? dimag / r.stderr_im : 0.0);
    all = all && ok;
    json e = estimate_json(r);
    e["exact_re"] = exact.real();
    e["exact_im"] = exact.imag();
    e["z"] = z;
    e["passed"] = ok;
    results.push_back(e);
    std::ostringstream est, ex;
    est << std::setprecision(6) << r.value.real() << (r.value.imag() < 0 ? "" : "+") << r.value.imag() << "i";
    ex << std::setprecision(6) << exact.real() << (exact.imag() < 0 ? "" : "+") << exact.imag() << "i";
    table << std::left << std::setw(22) << r.kernel << std::setw(26) << est.str() << std::setw(26) << ex.str()
          << std::setw(10) << std::setprecision(3) << z << (ok ? "pass" : "FAIL") << '\n';
  }
  RunResult out;
  out.report = envelope("pipeline", p.to_json(), results, all, start);
  write_json((std::filesystem::path(p.out_dir) / "report.json").string(), out.report);
  out.exit_code = all ? kPass : kCheckFailure;
  out.summary = table.str();
  return out;
}

RunResult run_frames(const FramesParams& p) {
  const auto start = Clock::now();
  json results = json::array();
  bool all = true;
  std::ostringstream table;
  for (const auto& check : p.checks) {
    FrameCheckReport r;
    if (check == "quadrature") {
      r = quadrature_frame_check(p.dim, p.tol);
    } else if (check == "moments") {
      r = moments_frame_check(p.moments_dim);
    } else if (check == "swap") {
      r = swap_expansion_check(p.swap_dim);
    } else if (check.rfind("generate:", 0) == 0) {
      FrameKernelSpec spec;
      const std::string arg = check.substr(9);
      if (arg == "delta") {
        spec.family = FrameKernelSpec::Family::Delta;
      } else {
        std::size_t used = 0;
        try {
          spec.sigma = std::stod(arg, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used == 0 || used != arg.size() || !(spec.sigma > 0 && spec.sigma < 100))
          throw ConfigError("generate:SIGMA needs 0 < sigma < 100 (or generate:delta)");
      }
      r = generate_frame(spec, p.dim, p.tol);
    } else if (check == "other") {
      r = other_frames_check(p.dim, p.tol);
    } else if (check == "dual") {
      r = canonical_dual_check(p.dual_dim);
    } else if (check == "double_commutator") {
      r = double_commutator_check(p.dim);
    } else if (check == "alternate") {
      const int d = std::min(p.dim, 6);
      std::mt19937_64 g(17);
      std::normal_distribution<double> nd;
      Eigen::MatrixXcd Z(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) Z(i, j) = cplx(nd(g), nd(g));
      Eigen::MatrixXcd ramp = Eigen::MatrixXcd::Zero(p.aux, p.aux);
      for (int i = 0; i < p.aux; ++i) ramp(i, i) = i + 1.0;
      const AlternateExpansionReport canon = alternate_expansion(Eigen::MatrixXcd::Identity(p.aux, p.aux), Z);
      const AlternateExpansionReport alt = alternate_expansion(ramp, Z);
      Eigen::MatrixXcd singular = Eigen::MatrixXcd::Identity(p.aux, p.aux);
      singular(p.aux - 1, p.aux - 1) = 1e-12;
      bool rejected = false;
      try {
        alternate_expansion(singular, Z);
      } catch (const NumericError&) {
        rejected = true;
      }
      r.name = "alternate";
      r.metrics = {{"canonical_error", canon.error},
                   {"ramp_error", alt.error},
                   {"ramp_canonical_gap", alt.canonical_gap},
                   {"ramp_condition", alt.condition},
                   {"near_singular_rejected", rejected ? 1.0 : 0.0}};
      r.passed = canon.error < 1e-2 && alt.error < 1e-2 && rejected;
      r.note = "L = diag(1..aux) and L = I over Hermite functions; L with condition 1e12 must be rejected";
    } else {
      throw ConfigError("unknown frames check '" + check + "'");
    }
    all = all && r.passed;
    results.push_back(frame_json(r));
    table << std::left << std::setw(22) << r.name << (r.passed ? "pass" : "FAIL") << '\n';
  }
  RunResult out;
  out.report = envelope("frames", p.to_json(), results, all, start);
  out.exit_code = all ? kPass : kCheckFailure;
  out.summary = table.str();
  return out;
}

RunResult run_spin(const SpinParams& p) {
  const auto start = Clock::now();
  const int d = p.two_j + 1;
  const double tol = p.two_j == 1 ? 1e-8 : 1e-6;
  const SwapReconstruction rec = swap_from_quorum(p.two_j, p.order);
  json results = json::array();
  const bool swap_ok = rec.error < tol && rec.involution_error <= 2.0 * std::max(rec.error, 1e-15) + 1e-14;
  results.push_back({{"name", "swap"},
                     {"order", rec.order},
                     {"operator_norm_error", rec.error},
                     {"refinement_error", rec.refinement_error},
                     {"involution_error", rec.involution_error},
                     {"tolerance", tol},
                     {"passed", swap_ok}});
  bool all = swap_ok;

  std::mt19937_64 g(p.seed);
  std::normal_distribution<double> nd;
  auto random_matrix = [&] {
    Eigen::MatrixXcd M(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) M(i, j) = cplx(nd(g), nd(g));
    return M;
  };
  const Eigen::MatrixXcd B = random_matrix();
  Eigen::MatrixXcd rho = B * B.adjoint();
  rho /= rho.trace();
  const Eigen::MatrixXcd R = random_matrix();
  const Eigen::MatrixXcd A = 0.5 * (R + R.adjoint());
  Eigen::MatrixXcd top = Eigen::MatrixXcd::Zero(d, d);
  top(d - 1, d - 1) = 1.0;

  const std::vector<std::tuple<std::string, Eigen::MatrixXcd, Eigen::MatrixXcd>> cases{
      {"highest_weight", top, top}, {"random", rho, A}, {"identity", rho, Eigen::MatrixXcd::Identity(d, d)}};
  std::uint64_t stream = 0;
  for (const auto& [name, r, obs] : cases) {
    const EstimateReport e = spin_estimate_demo(p.two_j, r, obs, p.shots, p.seed + (++stream));
    const cplx exact = (r * obs).trace();
    const cplx via_swap = (kron(r, obs) * rec.E).trace();
    const double dev = std::abs(e.value.real() - exact.real());
    const bool ok = dev <= 4.0 * e.stderr_re + 1e-12;
    all = all && ok;
    results.push_back({{"name", name},
                       {"estimate", e.value.real()},
                       {"stderr", e.stderr_re},
                       {"exact", exact.real()},
                       {"swap_identity_error", std::abs(via_swap - exact)},
                       {"shots", e.n},
                       {"passed", ok}});
  }
  RunResult out;
  out.report = envelope("spin", p.to_json(), results, all, start);
  out.exit_code = all ? kPass : kCheckFailure;
  return out;
}

}  // namespace homotomo::app
