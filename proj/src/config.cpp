#include "nswp/config.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace nswp {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

json scalar_value(const std::string& v) {
  if (v.empty()) return "";
  json j = json::parse(v, nullptr, false);
  if (!j.is_discarded()) return j;
  return v;
}

json ini_value(const std::string& v) {
  if (!v.empty() && (v.front() == '[' || v.front() == '"')) {
    json j = json::parse(v, nullptr, false);
    if (!j.is_discarded()) return j;
  }
  if (v.find(',') != std::string::npos) {
    json arr = json::array();
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) arr.push_back(scalar_value(trim(item)));
    return arr;
  }
  return scalar_value(v);
}

const std::set<std::string> kSections = {"grid",   "time",   "family", "input",  "transform", "smallness",
                                         "lambda", "solver", "norms",  "sweep",  "output",    "run"};

}  // namespace

json parse_ini(const std::string& text) {
  json out = json::object();
  std::string section;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty section name");
      if (!out.contains(section)) out[section] = json::object();
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    if (section.empty()) throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
    const std::string key = trim(t.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (out[section].contains(key))
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key " + section + "." + key);
    out[section][key] = ini_value(trim(t.substr(eq + 1)));
  }
  return out;
}

std::string to_ini(const json& cfg) {
  std::string out;
  for (auto it = cfg.begin(); it != cfg.end(); ++it) {
    if (!it.value().is_object()) throw ConfigError("to_ini: top-level entries must be sections");
    out += "[" + it.key() + "]\n";
    for (auto kv = it.value().begin(); kv != it.value().end(); ++kv) {
      if (kv.value().is_object()) throw ConfigError("to_ini: nested tables are not representable");
      out += kv.key() + " = " + kv.value().dump() + "\n";
    }
  }
  return out;
}

json load_config_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot read config " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  if (std::filesystem::path(path).extension() == ".json") {
    json j = json::parse(ss.str(), nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw ConfigError(path + ": not a JSON object");
    return j;
  }
  return parse_ini(ss.str());
}

std::string canonical_dump(const json& j) { return j.dump(); }

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) out += hex[md[i] >> 4], out += hex[md[i] & 15];
  return out;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be an object of sections");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!kSections.count(it.key())) throw ConfigError("unknown section [" + it.key() + "]");
    if (!it.value().is_object()) throw ConfigError("section [" + it.key() + "] must be a table");
  }
  ExperimentConfig c;
  c.raw_ = j;
  // Force every typed accessor once so errors surface at load time.
  const GridSpec g = c.grid();
  c.nodes_per_octave();
  c.family();
  c.C0();
  c.eta();
  c.seed();
  c.workers();
  c.solver();
  c.norm_names();
  c.sweep_axes();
  if (j.contains("transform")) c.transform(g);
  if (auto p = c.input_field(); p && !std::filesystem::exists(*p))
    throw ConfigError("[input] field: no such file " + *p);
  return c;
}

double ExperimentConfig::number(const std::string& s, const std::string& k, double dflt) const {
  if (!raw_.contains(s) || !raw_[s].contains(k)) return dflt;
  const json& v = raw_[s][k];
  if (!v.is_number()) throw ConfigError("[" + s + "] " + k + " must be a number");
  return v.get<double>();
}

std::string ExperimentConfig::text(const std::string& s, const std::string& k, const std::string& dflt) const {
  if (!raw_.contains(s) || !raw_[s].contains(k)) return dflt;
  const json& v = raw_[s][k];
  if (!v.is_string()) throw ConfigError("[" + s + "] " + k + " must be a string");
  return v.get<std::string>();
}

std::vector<double> ExperimentConfig::numbers(const std::string& s, const std::string& k) const {
  if (!raw_.contains(s) || !raw_[s].contains(k)) return {};
  const json& v = raw_[s][k];
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array()) throw ConfigError("[" + s + "] " + k + " must be a number list");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError("[" + s + "] " + k + " must be a number list");
    out.push_back(e.get<double>());
  }
  return out;
}

namespace {

int as_int(double v, const std::string& what) {
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError(what + " must be an integer");
  return int(v);
}

}  // namespace

GridSpec ExperimentConfig::grid() const {
  const int n = as_int(number("grid", "n", 32), "[grid] n");
  const double L = number("grid", "L", 2.0 * M_PI);
  const double frac = number("grid", "dealias_fraction", 2.0 / 3.0);
  try {
    return GridSpec::make(n, L, frac);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("[grid] ") + e.what());
  }
}

int ExperimentConfig::nodes_per_octave() const {
  const int k = as_int(number("time", "nodes_per_octave", 2), "[time] nodes_per_octave");
  if (k < 1) throw ConfigError("[time] nodes_per_octave must be >= 1");
  return k;
}

FamilyParams ExperimentConfig::family() const {
  FamilyParams p;
  p.epsilon = number("family", "epsilon", p.epsilon);
  p.alpha = number("family", "alpha", p.alpha);
  p.profile.amplitude = number("family", "amplitude", p.profile.amplitude);
  p.profile.width = number("family", "width", p.profile.width);
  if (!(p.epsilon > 0.0 && p.epsilon < 1.0)) throw ConfigError("[family] epsilon must lie in (0, 1)");
  if (!(p.alpha >= 0.0 && p.alpha <= 1.0)) throw ConfigError("[family] alpha must lie in [0, 1]");
  if (!(p.profile.width > 0.0)) throw ConfigError("[family] width must be positive");
  p.grid = grid();
  return p;
}

std::optional<std::string> ExperimentConfig::input_field() const {
  if (!raw_.contains("input") || !raw_["input"].contains("field")) return std::nullopt;
  return text("input", "field", "");
}

TransformSpec ExperimentConfig::transform(const GridSpec& target) const {
  const int Lambda = as_int(number("transform", "Lambda", 8), "[transform] Lambda");
  if (raw_.contains("transform") && raw_["transform"].contains("centers")) {
    const json& cs = raw_["transform"]["centers"];
    TransformSpec s;
    s.Lambda = Lambda;
    if (!cs.is_array()) throw ConfigError("[transform] centers must be a list of [x, y, z]");
    for (const auto& c : cs) {
      if (!c.is_array() || c.size() != 3) throw ConfigError("[transform] centers must be a list of [x, y, z]");
      s.centers.push_back({c[0].get<double>(), c[1].get<double>(), c[2].get<double>()});
    }
    s.delta = number("transform", "delta", measured_delta(s.centers));
    return s;
  }
  const int K = as_int(number("transform", "K", 1), "[transform] K");
  if (K < 1) throw ConfigError("[transform] K must be >= 1");
  return lattice_spec(K, Lambda, target.dx());
}

double ExperimentConfig::C0() const {
  const double c = number("smallness", "C0", 1.0);
  if (!(c > 0.0)) throw ConfigError("[smallness] C0 must be positive");
  return c;
}

std::optional<double> ExperimentConfig::eta() const {
  if (!raw_.contains("smallness") || !raw_["smallness"].contains("eta")) return std::nullopt;
  const double e = number("smallness", "eta", 0.5);
  if (!(e > 0.0 && e < 1.0)) throw ConfigError("[smallness] eta must lie in (0, 1)");
  return e;
}

std::uint64_t ExperimentConfig::seed() const {
  const double s = number("run", "seed", 1);
  if (s < 0 || s != std::floor(s)) throw ConfigError("[run] seed must be a non-negative integer");
  return std::uint64_t(s);
}

int ExperimentConfig::workers() const {
  const int w = as_int(number("run", "workers", 1), "[run] workers");
  if (w < 1) throw ConfigError("[run] workers must be >= 1");
  return w;
}

int ExperimentConfig::lambda_probes() const {
  const int p = as_int(number("lambda", "probes", 50), "[lambda] probes");
  if (p < 1) throw ConfigError("[lambda] probes must be >= 1");
  return p;
}

SolverConfig ExperimentConfig::solver() const {
  SolverConfig c;
  c.T_end = number("solver", "T_end", c.T_end);
  c.cfl = number("solver", "cfl", c.cfl);
  c.dt_max = number("solver", "dt_max", c.dt_max);
  c.dt_fixed = number("solver", "dt_fixed", c.dt_fixed);
  c.dt_floor = number("solver", "dt_floor", c.dt_floor);
  c.blowup_factor = number("solver", "blowup_factor", c.blowup_factor);
  c.early_exit_fraction = number("solver", "early_exit_fraction", c.early_exit_fraction);
  c.snapshot_times = numbers("solver", "snapshot_times");
  if (!(c.T_end >= 0.0) || !(c.cfl > 0.0) || !(c.dt_max > 0.0) || c.dt_fixed < 0.0)
    throw ConfigError("[solver] T_end >= 0, cfl > 0, dt_max > 0 and dt_fixed >= 0 are required");
  return c;
}

std::vector<std::string> ExperimentConfig::norm_names() const {
  if (!raw_.contains("norms") || !raw_["norms"].contains("names")) return {};
  const json& v = raw_["norms"]["names"];
  std::vector<std::string> out;
  if (v.is_string()) return {v.get<std::string>()};
  if (!v.is_array()) throw ConfigError("[norms] names must be a list of names");
  for (const auto& e : v) {
    if (!e.is_string()) throw ConfigError("[norms] names must be a list of names");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::map<std::string, std::vector<double>> ExperimentConfig::sweep_axes() const {
  std::map<std::string, std::vector<double>> out;
  if (!raw_.contains("sweep")) return out;
  for (auto it = raw_["sweep"].begin(); it != raw_["sweep"].end(); ++it) {
    auto v = numbers("sweep", it.key());
    if (v.empty()) throw ConfigError("[sweep] " + it.key() + " is empty");
    out[it.key()] = std::move(v);
  }
  return out;
}

}  // namespace nswp
