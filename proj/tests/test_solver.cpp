#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "nswp/ns_solver.hpp"
#include "nswp/wellposedness.hpp"
#include "support.hpp"

using namespace nswp;
using namespace nswp::testing;

namespace {

SolverConfig fixed(double dt, double T) {
  SolverConfig c;
  c.T_end = T;
  c.dt_fixed = dt;
  c.early_exit_fraction = 0.0;
  c.keep_snapshots = false;
  return c;
}

}  // namespace

TEST_CASE("CFL violation throws with a usable step") {
  const GridSpec g = GridSpec::make(16, 2 * M_PI);
  VectorField u = random_solenoidal(g, 4.0, 1);
  u *= 50.0;
  try {
    step(u, 1.0);
    FAIL("expected CflError");
  } catch (const CflError& e) {
    CHECK(e.suggested_dt > 0.0);
    CHECK(e.suggested_dt < 1.0);
    CHECK_NOTHROW(step(u, e.suggested_dt));
  }
}

TEST_CASE("zero stays zero; a shear mode is pure heat flow") {
  const GridSpec g = GridSpec::make(16, 2 * M_PI);
  VectorField z(g);
  z.divergence_free = true;
  const SolveTrace tz = solve(z, fixed(0.05, 0.5));
  CHECK(max_coeff(tz.final_state) == 0.0);
  CHECK_FALSE(tz.blowup_flag);

  VectorField shear(g);
  shear[0] = sample(g, [](double, double y, double z) { return std::sin(2 * y) + 0.5 * std::cos(z); });
  shear.divergence_free = true;
  const SolveTrace ts = solve(shear, fixed(0.05, 1.0));
  CHECK(rel_diff(ts.final_state, heat_flow(shear, 1.0)) < 1e-13);
  CHECK(ts.final_time == doctest::Approx(1.0));
}

TEST_CASE("energy identity and divergence on a random field") {
  const GridSpec g = GridSpec::make(16, 2 * M_PI);
  VectorField u0 = random_solenoidal(g, 4.0, 3);
  u0 *= 4.0;
  SolverConfig c;
  c.T_end = 0.5;
  c.dt_max = 2.5e-3;
  c.early_exit_fraction = 0.0;
  const SolveTrace tr = solve(u0, c);
  CHECK(tr.energy_residual_rate < 1e-6);
  CHECK(tr.max_divergence < 1e-10);
  CHECK(tr.energy.back() < tr.energy.front());
  for (std::size_t i = 1; i < tr.energy.size(); ++i) CHECK(tr.energy[i] <= tr.energy[i - 1]);
}

TEST_CASE("fourth-order convergence in dt") {
  const GridSpec g = GridSpec::make(16, 2 * M_PI);
  VectorField u0 = random_solenoidal(g, 4.0, 5);
  u0 *= 6.0;
  const double T = 0.2;
  const VectorField ref = solve(u0, fixed(0.0025, T)).final_state;
  const double e1 = l2_norm(solve(u0, fixed(0.02, T)).final_state - ref);
  const double e2 = l2_norm(solve(u0, fixed(0.01, T)).final_state - ref);
  // the reference carries 1/64 of e1
  CHECK(e1 / e2 > 12.0);
  CHECK(e1 / e2 < 20.0);
}

TEST_CASE("scaling: lambda u0(lambda x) on the half box reproduces lambda u(lambda^2 t, lambda x)") {
  const GridSpec g = GridSpec::make(16, 2 * M_PI), h = GridSpec::make(16, M_PI);
  VectorField u0 = random_solenoidal(g, 4.0, 7);
  u0 *= 3.0;
  VectorField ul(h, true);
  for (int i = 0; i < 3; ++i) ul[i].c = u0[i].c;
  ul *= 2.0;
  ul.divergence_free = true;
  const VectorField a = solve(u0, fixed(0.01, 0.2)).final_state;
  VectorField b = solve(ul, fixed(0.0025, 0.05)).final_state;
  VectorField back(g, true);
  for (int i = 0; i < 3; ++i) back[i].c = b[i].c;
  back *= 0.5;
  CHECK(rel_diff(back, a) < 1e-4);
}

TEST_CASE("snapshots satisfy the Duhamel formula") {
  const GridSpec g = GridSpec::make(16, 2 * M_PI);
  VectorField u0 = random_solenoidal(g, 3.0, 9);
  u0 *= 2.0;
  const TimeGrid tg = TimeGrid::make(std::ldexp(1.0, -10), 0.5, 8);
  SolverConfig c;
  c.T_end = 0.5;
  c.dt_max = 2.5e-3;
  c.early_exit_fraction = 0.0;
  c.snapshot_times = tg.t;
  const SolveTrace tr = solve(u0, c);
  REQUIRE(tr.snapshots.size() == tg.size());
  for (std::size_t i = 0; i < tg.size(); ++i) CHECK(tr.snapshot_times[i] == tg.t[i]);
  CHECK(duhamel_residual(tr.snapshots, u0, tg) < 1e-3);
}

TEST_CASE("blow-up flag, early exit, trace output") {
  const GridSpec g = GridSpec::make(16, 2 * M_PI);
  VectorField u0 = random_solenoidal(g, 4.0, 11);
  SolverConfig c;
  c.T_end = 1.0;
  c.dt_floor = 10.0;  // every CFL step is below it
  const SolveTrace flagged = solve(u0, c);
  CHECK(flagged.blowup_flag);
  CHECK(flagged.flag.back() == 1);

  SolverConfig e;
  e.T_end = 50.0;
  e.dt_max = 0.05;
  const SolveTrace ex = solve(u0, e);
  CHECK(ex.early_exit);
  CHECK(ex.hhalf.back() < 0.01 * ex.hhalf.front());
  CHECK(ex.final_time < 50.0);

  const auto path = (std::filesystem::temp_directory_path() / "nswp_trace.csv").string();
  ex.write_csv(path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,energy,hhalf,dissipation,h32_sq_integral,dt,flag");
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == ex.times.size());
  std::filesystem::remove(path);
  const auto j = ex.summary_json();
  CHECK(j.contains("config"));
  CHECK(j["config"]["blowup_factor"] == 50.0);
}

TEST_CASE("norm helpers on a single mode") {
  const GridSpec g = GridSpec::make(16, 2 * M_PI);
  VectorField u(g);
  u[0] = sample(g, [](double, double y, double) { return std::cos(2 * y); });
  u.divergence_free = true;
  CHECK(energy(u) == doctest::Approx(std::pow(2 * M_PI, 3) / 2));
  CHECK(hhalf_norm(u) == doctest::Approx(std::sqrt(2.0 * energy(u))));
  CHECK(max_vorticity(u) == doctest::Approx(2.0));
}
