#include "homotomo/app.hpp"

#include "homotomo/errors.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace homotomo::app {
namespace {

std::vector<double> numbers_after_colon(const std::string& spec) {
  std::vector<double> out;
  std::stringstream ss(spec.substr(spec.find(':') + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !std::isfinite(v)) throw ConfigError("bad number in state spec '" + spec + "'");
    out.push_back(v);
  }
  return out;
}

DensityMatrix state_from_file(const std::string& path, int dim) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open state file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("state file " + path + ": " + e.what());
  }
  if (!j.is_array() || j.size() != static_cast<std::size_t>(dim))
    throw ConfigError("state file " + path + ": expected " + std::to_string(dim) + " rows (cutoff + 1)");
  DensityMatrix s;
  s.rho.resize(dim, dim);
  for (int r = 0; r < dim; ++r) {
    if (!j[r].is_array() || j[r].size() != static_cast<std::size_t>(dim))
      throw ConfigError("state file " + path + ": row " + std::to_string(r) + " must hold " + std::to_string(dim) + " entries");
    for (int c = 0; c < dim; ++c) {
      const json& z = j[r][c];
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number())
        throw ConfigError("state file " + path + ": entries must be [re, im] pairs");
      s.rho(r, c) = cplx(z[0].get<double>(), z[1].get<double>());
    }
  }
  try {
    validate(s);
  } catch (const NumericError& e) {
    throw ConfigError("state file " + path + " is not a density matrix: " + e.what());
  }
  return s;
}

}  // namespace

DensityMatrix parse_state(const std::string& spec, int dim, double max_deficit) {
  if (dim < 1) throw ConfigError("cutoff must be nonnegative");
  StateTolerance tol;
  tol.max_deficit = max_deficit;
  const std::string kind = spec.substr(0, spec.find(':'));
  if (spec.find(':') != std::string::npos && (kind == "fock" || kind == "coherent" || kind == "thermal")) {
    const std::vector<double> v = numbers_after_colon(spec);
    if (kind == "fock") {
      if (v.size() != 1 || v[0] < 0 || v[0] != std::floor(v[0])) throw ConfigError("fock state spec is fock:n");
      if (v[0] >= dim) throw ConfigError("fock:" + std::to_string(static_cast<int>(v[0])) + " exceeds the cutoff");
      return state_fock(static_cast<int>(v[0]), dim);
    }
    if (kind == "coherent") {
      if (v.size() != 2) throw ConfigError("coherent state spec is coherent:re,im");
      return state_coherent({v[0], v[1]}, dim, tol);
    }
    if (v.size() != 1 || v[0] < 0) throw ConfigError("thermal state spec is thermal:nbar");
    return state_thermal(v[0], dim, tol);
  }
  if (std::filesystem::path(spec).extension() == ".json") return state_from_file(spec, dim);
  throw ConfigError("unknown state spec '" + spec + "'");
}

void write_csv(const std::string& path, const std::vector<QuadratureRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << "phi,x,eta\n";
  char buf[96];
  for (const auto& r : records) {
    const int n = std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", r.phi, r.x, r.eta);
    out.write(buf, n);
  }
  if (!out) throw IoError("write failed: " + path);
}

std::vector<QuadratureRecord> read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || (line != "phi,x,eta" && line != "phi,x,eta\r"))
    throw ConfigError(path + ": expected header 'phi,x,eta'");
  std::vector<QuadratureRecord> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    QuadratureRecord r;
    char* end = nullptr;
    const char* p = line.c_str();
    double* fields[3] = {&r.phi, &r.x, &r.eta};
    for (int f = 0; f < 3; ++f) {
      *fields[f] = std::strtod(p, &end);
      const char expect = f < 2 ? ',' : '\0';
      if (end == p || !std::isfinite(*fields[f]) || (*end != expect && !(f == 2 && *end == '\r')))
        throw ConfigError(path + ":" + std::to_string(lineno) + ": malformed record");
      p = end + 1;
    }
    if (!(r.eta > 0.0 && r.eta <= 1.0)) throw ConfigError(path + ":" + std::to_string(lineno) + ": eta outside (0, 1]");
    out.push_back(r);
  }
  return out;
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace homotomo::app
