// nswp: config-driven experiments. Exit codes: 0 pass, 1 usage or configuration error,
// 2 verdict fail / diverged or flagged run.

#include <openssl/crypto.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "commands.hpp"
#include "nswp/fft.hpp"
#include "nswp/simd.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json versions() {
#if defined(__clang__)
  const std::string compiler = "clang " __clang_version__;
#elif defined(__GNUC__)
  const std::string compiler = "gcc " __VERSION__;
#else
  const std::string compiler = "unknown";
#endif
  return {{"fftw", nswp::fft::library_version()},
          {"compiler", compiler},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
          {"cli11", CLI11_VERSION},
          {"openssl", OpenSSL_version(OPENSSL_VERSION)},
          {"simd", nswp::simd::isa_name(nswp::simd::active_isa())}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Norm, transform and well-posedness experiments on periodic 3D fields"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  std::int64_t seed = -1;
  int workers = 0;
  app.add_option("--config,-c", config_path, "INI or JSON experiment file")->required()->check(CLI::ExistingFile);
  app.add_option("--out,-o", out_dir, "output directory (default [output] dir, else nswp_out)");
  app.add_option("--seed", seed, "overrides [run] seed")->check(CLI::NonNegativeNumber);
  app.add_option("--workers", workers, "overrides [run] workers")->check(CLI::PositiveNumber);

  const std::map<std::string, std::pair<std::string, std::function<int(nswp::cli::Context&)>>> commands = {
      {"norms", {"evaluate [norms] names on the [input] datum", nswp::cli::cmd_norms}},
      {"family-sweep", {"norm scaling of the family over [sweep] epsilon / alpha", nswp::cli::cmd_family_sweep}},
      {"fractal", {"transform asymptotics over [sweep] Lambda", nswp::cli::cmd_fractal}},
      {"smallness", {"smallness test, optionally the mild solve", nswp::cli::cmd_smallness}},
      {"simulate", {"pseudo-spectral run with energy diagnostics", nswp::cli::cmd_simulate}},
      {"kt-norm", {"BMO^-1 ([lambda] value = 0) or X_lambda norm of the heat flow", nswp::cli::cmd_ktnorm}},
  };
  // global options may follow the subcommand
  for (const auto& [name, c] : commands) app.add_subcommand(name, c.first)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  const std::string name = app.get_subcommands().front()->get_name();

  const auto start = std::chrono::steady_clock::now();
  nswp::cli::Context ctx;
  int code = 1;
  try {
    ctx.cfg = nswp::ExperimentConfig::from_json(nswp::load_config_file(config_path));
    if (seed >= 0) ctx.cfg.set_seed(std::uint64_t(seed));
    if (workers > 0) ctx.cfg.set_workers(workers);
    ctx.out = out_dir.empty() ? fs::path(ctx.cfg.text("output", "dir", "nswp_out")) : fs::path(out_dir);
    fs::create_directories(ctx.out);
    code = commands.at(name).second(ctx);
  } catch (const std::exception& e) {
    // config, grid, resolvability, transform and argument errors are all the caller's to fix
    std::cerr << "nswp " << name << ": " << e.what() << "\n";
    code = 1;
  }
  if (ctx.out.empty()) return code;

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::vector<std::string> outputs = ctx.outputs;
  std::sort(outputs.begin(), outputs.end());
  // wall time and versions make the manifest the one output that is not reproducible byte for byte
  json manifest = {{"command", name},
                   {"argv", std::vector<std::string>(argv, argv + argc)},
                   {"config_hash", ctx.cfg.hash()},
                   {"config", ctx.cfg.to_json()},
                   {"exit_code", code},
                   {"versions", versions()},
                   {"wall_seconds", wall},
                   {"outputs", outputs}};
  try {
    ctx.outputs.clear();
    ctx.write_text("manifest.json", manifest.dump(2) + "\n");
  } catch (const std::exception& e) {
    std::cerr << "nswp: " << e.what() << "\n";
    return 1;
  }
  std::cout << name << ": exit " << code << ", " << outputs.size() << " files in " << ctx.out.string() << "\n";
  return code;
}
