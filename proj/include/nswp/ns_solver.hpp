#pragma once
// Dealiased pseudo-spectral Navier-Stokes (unit viscosity) on the periodic box with
// integrating-factor RK4: the heat part is exact, P(u.grad u) is explicit.

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "nswp/spectral_core.hpp"
#include "nswp/time_grid.hpp"

namespace nswp {

struct CflError : std::domain_error {
  double suggested_dt;
  CflError(const std::string& what, double dt) : std::domain_error(what), suggested_dt(dt) {}
};

struct SolverConfig {
  double T_end = 5.0;
  double cfl = 0.5;             // dt <= cfl * dx / max|u|
  double dt_max = 1e-2;
  double dt_fixed = 0.0;        // > 0: fixed step (still split to land on snapshot times)
  double dt_floor = 1e-6;       // CFL-forced dt below this raises the blow-up flag
  double blowup_factor = 50.0;  // H^{1/2} growth that raises the blow-up flag
  double early_exit_fraction = 0.01;  // stop once H^{1/2} < fraction * initial; 0 disables
  std::vector<double> snapshot_times;
  bool keep_snapshots = true;
  std::string checkpoint_prefix;  // non-empty: write each snapshot as <prefix>_<k>.fld
  int vorticity_every = 1;        // trace rows between vorticity evaluations (0 = never)

  nlohmann::json to_json() const;
};

struct SolveTrace {
  std::vector<double> times, energy, hhalf, dissipation, h32_sq_integral, max_vorticity, dt;
  std::vector<int> flag;  // per row: 1 once the blow-up flag is raised
  bool blowup_flag = false;
  std::string blowup_reason;
  bool early_exit = false;
  double final_time = 0.0;
  long steps = 0;
  double max_divergence = 0.0;            // max relative divergence over the run
  double energy_residual_rate = 0.0;      // max_t |E + 2 D - E0| / (E0 t)
  std::vector<double> snapshot_times;
  std::vector<VectorField> snapshots;
  VectorField final_state;
  SolverConfig config;

  void write_csv(const std::string& path) const;
  nlohmann::json summary_json() const;
};

// One integrating-factor RK4 step; throws CflError when dt violates the CFL bound.
VectorField step(const VectorField& u, double dt, double cfl = 0.5);
VectorField step_unchecked(const VectorField& u, double dt);

SolveTrace solve(const VectorField& u0, const SolverConfig& cfg);

// sup_i |u(t_i) - S(t_i) u0 + int_0^{t_i} S(t_i - s) P(u.grad u)(s) ds|_2 / |u(t_i)|_2 with
// u(t_i) the snapshots (one per node of tg).
double duhamel_residual(const std::vector<VectorField>& snapshots, const VectorField& u0,
                        const TimeGrid& tg);

// Energy-type quantities.
double energy(const VectorField& u);            // |u|_2^2
double hhalf_norm(const VectorField& u);        // |u|_{H^{1/2}}
double max_vorticity(const VectorField& u);

}  // namespace nswp
