#pragma once
// Experiment configuration. Files are either line-oriented INI ([section] / key = value,
// '#' or ';' comments) or JSON; both map onto one JSON object, whose compact sorted dump is
// the canonical form that gets hashed.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "nswp/data_families.hpp"
#include "nswp/fractal_transform.hpp"
#include "nswp/ns_solver.hpp"
#include "nswp/spectral_core.hpp"

namespace nswp {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// INI values are typed on read: true/false, numbers, comma lists (arrays), else strings.
nlohmann::json parse_ini(const std::string& text);
std::string to_ini(const nlohmann::json& cfg);

nlohmann::json load_config_file(const std::string& path);  // by extension: .json, else INI

std::string canonical_dump(const nlohmann::json& j);
std::string sha256_hex(const std::string& bytes);
inline std::string config_hash(const nlohmann::json& cfg) { return sha256_hex(canonical_dump(cfg)); }

class ExperimentConfig {
 public:
  ExperimentConfig() : raw_(nlohmann::json::object()) {}
  // Validates section names and value types; paths must exist.
  static ExperimentConfig from_json(const nlohmann::json& j);
  const nlohmann::json& to_json() const { return raw_; }
  std::string hash() const { return config_hash(raw_); }

  GridSpec grid() const;
  int nodes_per_octave() const;
  FamilyParams family() const;                    // grid included
  std::optional<std::string> input_field() const;  // [input] field
  TransformSpec transform(const GridSpec& target) const;
  double C0() const;
  std::optional<double> eta() const;
  std::uint64_t seed() const;
  int workers() const;
  int lambda_probes() const;
  SolverConfig solver() const;
  std::vector<std::string> norm_names() const;
  std::map<std::string, std::vector<double>> sweep_axes() const;

  void set_seed(std::uint64_t s) { raw_["run"]["seed"] = s; }
  void set_workers(int w) { raw_["run"]["workers"] = w; }

  // Typed lookup with default; throws ConfigError on a type mismatch.
  double number(const std::string& section, const std::string& key, double dflt) const;
  std::string text(const std::string& section, const std::string& key, const std::string& dflt) const;
  std::vector<double> numbers(const std::string& section, const std::string& key) const;

 private:
  nlohmann::json raw_;
};

}  // namespace nswp
