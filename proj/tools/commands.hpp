#pragma once
// Subcommands of the nswp CLI. Each returns an exit code: 0 pass, 2 verdict fail or
// diverged run. Usage and configuration problems throw (the caller maps them to 1).

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "nswp/config.hpp"

namespace nswp::cli {

struct Context {
  ExperimentConfig cfg;
  std::filesystem::path out;
  std::vector<std::string> outputs;  // file names written under out, in write order

  // Atomic: written to a temporary sibling, then renamed over the target.
  void write_text(const std::string& name, const std::string& content);
  // Embeds config_hash and config before writing.
  void write_report(const std::string& name, nlohmann::json report);
};

int cmd_norms(Context& ctx);
int cmd_family_sweep(Context& ctx);
int cmd_fractal(Context& ctx);
int cmd_smallness(Context& ctx);
int cmd_simulate(Context& ctx);
int cmd_ktnorm(Context& ctx);

// "%.17g"
std::string fmt(double v);

}  // namespace nswp::cli
