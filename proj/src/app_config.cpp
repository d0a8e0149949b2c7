#include "homotomo/app.hpp"

#include "homotomo/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>

namespace homotomo::app {
namespace {

// Typed access to one config section; unknown keys are rejected by finish().
class Reader {
 public:
  explicit Reader(const Tree& t) : t_(t) {}

  std::string str(const std::string& key, std::string def) {
    used_.insert(key);
    if (auto v = t_.get_optional<std::string>(key)) return trim(*v);
    return def;
  }

  template <typename Int>
  Int integer(const std::string& key, Int def, long long lo, long long hi) {
    used_.insert(key);
    const auto v = t_.get_optional<std::string>(key);
    if (!v) return def;
    const std::string s = trim(*v);
    long long out = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError("config key '" + key + "': not an integer: '" + s + "'");
    if (out < lo || out > hi)
      throw ConfigError("config key '" + key + "' = " + s + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return static_cast<Int>(out);
  }

  double real(const std::string& key, double def, double lo, double hi) {
    used_.insert(key);
    const auto v = t_.get_optional<std::string>(key);
    if (!v) return def;
    const std::string s = trim(*v);
    double out = 0.0;
    std::size_t used = 0;
    try {
      out = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty() || !std::isfinite(out)) throw ConfigError("config key '" + key + "': not a number: '" + s + "'");
    if (out < lo || out > hi) throw ConfigError("config key '" + key + "' = " + s + " out of range");
    return out;
  }

  std::vector<std::string> list(const std::string& key, std::vector<std::string> def) {
    used_.insert(key);
    const auto v = t_.get_optional<std::string>(key);
    if (!v) return def;
    std::vector<std::string> out;
    std::string item;
    for (char c : *v + ";") {
      if (c == ';' || std::isspace(static_cast<unsigned char>(c))) {
        if (!item.empty()) out.push_back(item);
        item.clear();
      } else {
        item += c;
      }
    }
    if (out.empty()) throw ConfigError("config key '" + key + "' is empty");
    return out;
  }

  void finish() const {
    for (const auto& [k, v] : t_)
      if (!used_.count(k)) throw ConfigError("unknown config key '" + k + "'");
  }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
  }

  const Tree& t_;
  std::set<std::string> used_;
};

SampleParams read_sample(Reader& r) {
  SampleParams p;
  p.state = r.str("state", p.state);
  p.cutoff = r.integer<int>("cutoff", p.cutoff, 0, 60);
  p.count = r.integer<std::size_t>("count", p.count, 1, 1'000'000'000);
  p.eta = r.real("eta", p.eta, 1e-6, 1.0);
  p.seed = r.integer<std::uint64_t>("seed", p.seed, 0, std::numeric_limits<long long>::max());
  p.phases = r.str("phases", p.phases);
  p.threads = r.integer<unsigned>("threads", p.threads, 0, 256);
  p.max_deficit = r.real("max_deficit", p.max_deficit, 0.0, 1e-2);
  if (p.phases != "random" && p.phases.rfind("grid:", 0) != 0) throw ConfigError("phases must be 'random' or 'grid:N'");
  return p;
}

json sample_json(const SampleParams& p) {
  return {{"state", p.state}, {"cutoff", p.cutoff}, {"count", p.count},   {"eta", p.eta},
          {"seed", p.seed},   {"phases", p.phases}, {"threads", p.threads}, {"max_deficit", p.max_deficit}};
}

}  // namespace

std::string version() { return HOMOTOMO_VERSION; }

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const IoError*>(&e) ||
      dynamic_cast<const InsufficientEfficiency*>(&e))
    return kConfigFailure;
  return kNumericFailure;
}

Tree load_config(const std::string& path) {
  if (!std::filesystem::exists(path)) throw IoError("config file not found: " + path);
  Tree t;
  try {
    boost::property_tree::read_ini(path, t);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return t;
}

Tree section(const Tree& config, const std::string& name) {
  if (auto child = config.get_child_optional(name)) return *child;
  return {};
}

Tree with_overrides(Tree base, const std::map<std::string, std::string>& overrides) {
  for (const auto& [k, v] : overrides) base.put(k, v);
  return base;
}

SampleParams SampleParams::from(const Tree& t) {
  Reader r(t);
  SampleParams p = read_sample(r);
  p.output = r.str("output", p.output);
  r.finish();
  return p;
}

json SampleParams::to_json() const {
  json j = sample_json(*this);
  j["output"] = output;
  return j;
}

EstimateParams EstimateParams::from(const Tree& t) {
  Reader r(t);
  EstimateParams p;
  p.input = r.str("input", p.input);
  p.kernels = r.list("kernels", p.kernels);
  p.eta = r.real("eta", p.eta, 0.0, 1.0);
  p.threads = r.integer<unsigned>("threads", p.threads, 0, 256);
  r.finish();
  return p;
}

json EstimateParams::to_json() const { return {{"input", input}, {"kernels", kernels}, {"eta", eta}, {"threads", threads}}; }

PipelineParams PipelineParams::from(const Tree& t) {
  Reader r(t);
  PipelineParams p;
  p.sample = read_sample(r);
  p.kernels = r.list("kernels", p.kernels);
  p.out_dir = r.str("out_dir", p.out_dir);
  p.z_max = r.real("z_max", p.z_max, 0.5, 100.0);
  r.finish();
  return p;
}

json PipelineParams::to_json() const {
  json j = sample_json(sample);
  j["kernels"] = kernels;
  j["out_dir"] = out_dir;
  j["z_max"] = z_max;
  return j;
}

VerifyParams VerifyParams::from(const Tree& t) {
  Reader r(t);
  VerifyParams p;
  p.only = r.str("only", p.only);
  p.degree = r.integer<int>("degree", p.degree, 0, 1000);
  auto lim = [&](const char* key, int& v) { v = r.integer<int>(key, v, 0, 1000); };
  lim("main_k", p.main_k);
  lim("main_n", p.main_n);
  lim("richter", p.richter);
  lim("symm", p.symm);
  lim("s_order", p.s_order);
  lim("trunc_l", p.trunc_l);
  lim("trunc_n", p.trunc_n);
  lim("mu_nu", p.mu_nu);
  lim("resample", p.resample);
  lim("poisson", p.poisson);
  lim("displacement_order", p.displacement_order);
  r.finish();
  if (p.degree > 0)
    p.main_k = p.main_n = p.richter = p.symm = p.s_order = p.trunc_l = p.trunc_n = p.mu_nu = p.resample = p.poisson =
        p.displacement_order = p.degree;
  return p;
}

json VerifyParams::to_json() const {
  return {{"only", only},     {"degree", degree},   {"main_k", main_k},     {"main_n", main_n},
          {"richter", richter}, {"symm", symm},       {"s_order", s_order},   {"trunc_l", trunc_l},
          {"trunc_n", trunc_n}, {"mu_nu", mu_nu},     {"resample", resample}, {"poisson", poisson},
          {"displacement_order", displacement_order}};
}

FramesParams FramesParams::from(const Tree& t) {
  Reader r(t);
  FramesParams p;
  p.checks = r.list("checks", p.checks);
  p.dim = r.integer<int>("dim", p.dim, 3, 10);
  p.moments_dim = r.integer<int>("moments_dim", p.moments_dim, 1, 12);
  p.swap_dim = r.integer<int>("swap_dim", p.swap_dim, 1, 10);
  p.dual_dim = r.integer<int>("dual_dim", p.dual_dim, 3, 14);
  p.aux = r.integer<int>("aux", p.aux, 2, 200);
  p.tol = r.real("tol", p.tol, 0.0, 1.0);
  r.finish();
  return p;
}

json FramesParams::to_json() const {
  return {{"checks", checks},     {"dim", dim}, {"moments_dim", moments_dim}, {"swap_dim", swap_dim},
          {"dual_dim", dual_dim}, {"aux", aux}, {"tol", tol}};
}

SpinParams SpinParams::from(const Tree& t) {
  Reader r(t);
  SpinParams p;
  const double J = r.real("J", 0.5 * p.two_j, 0.5, 8.0);
  if (std::abs(2.0 * J - std::round(2.0 * J)) > 1e-12) throw ConfigError("J must be a positive half-integer");
  p.two_j = static_cast<int>(std::lround(2.0 * J));
  p.shots = r.integer<std::size_t>("shots", p.shots, 2, 100'000'000);
  p.seed = r.integer<std::uint64_t>("seed", p.seed, 0, std::numeric_limits<long long>::max());
  p.order = r.integer<int>("order", p.order, 1, 64);
  r.finish();
  return p;
}

json SpinParams::to_json() const { return {{"J", 0.5 * two_j}, {"shots", shots}, {"seed", seed}, {"order", order}}; }

}  // namespace homotomo::app
