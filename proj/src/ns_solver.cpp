#include "nswp/ns_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "nswp/field_series.hpp"
#include "nswp/operators.hpp"
#include "nswp/simd.hpp"
#include "nswp/wellposedness.hpp"

namespace nswp {

nlohmann::json SolverConfig::to_json() const {
  return {{"T_end", T_end},
          {"cfl", cfl},
          {"dt_max", dt_max},
          {"dt_fixed", dt_fixed},
          {"dt_floor", dt_floor},
          {"blowup_factor", blowup_factor},
          {"early_exit_fraction", early_exit_fraction},
          {"snapshot_times", snapshot_times},
          {"viscosity", 1.0}};
}

double energy(const VectorField& u) {
  const double n = l2_norm(u);
  return n * n;
}

double hhalf_norm(const VectorField& u) {
  const GridSpec& g = u.grid();
  const auto w = wavenumbers(g);
  double s = 0.0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < u[c].c.size(); ++i) s += w->kabs[i] * std::norm(u[c].c[i]);
  return std::sqrt(g.L * g.L * g.L * s);
}

double max_vorticity(const VectorField& u) { return max_abs_physical(curl(u)); }

namespace {

VectorField neg_nonlinearity(const VectorField& u) {
  VectorField n = ns_nonlinearity(u);
  n *= -1.0;
  return n;
}

// k1 = -N(u) is supplied by the caller (it is the previous step's end value).
VectorField rk4(const VectorField& u, const VectorField& k1, double h) {
  VectorField E2u = heat_flow(u, 0.5 * h);
  VectorField Eu = heat_flow(E2u, 0.5 * h);

  VectorField a = u;
  a.axpy(0.5 * h, k1);
  heat_flow_inplace(a, 0.5 * h);
  a.divergence_free = true;
  VectorField k2 = neg_nonlinearity(a);

  VectorField b = E2u;
  b.axpy(0.5 * h, k2);
  b.divergence_free = true;
  VectorField k3 = neg_nonlinearity(b);

  VectorField c = Eu;
  c.axpy(h, heat_flow(k3, 0.5 * h));
  c.divergence_free = true;
  VectorField k4 = neg_nonlinearity(c);

  VectorField out = Eu;
  VectorField mid = k2;
  mid += k3;
  heat_flow_inplace(mid, 0.5 * h);
  out.axpy(h / 6.0, heat_flow(k1, h));
  out.axpy(h / 3.0, mid);
  out.axpy(h / 6.0, k4);
  out.divergence_free = true;
  return out;
}

struct Sums {
  double E = 0.0, D = 0.0, dD = 0.0, H = 0.0, dH = 0.0, hh = 0.0;
};

// Quadratic quantities and their time derivatives from u_t = -kappa u + k1 (k1 = -N(u)).
Sums spectral_sums(const VectorField& u, const VectorField& k1) {
  const GridSpec& g = u.grid();
  const auto w = wavenumbers(g);
  const double L3 = g.L * g.L * g.L;
  Sums s;
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < u[c].c.size(); ++i) {
      const cplx z = u[c].c[i];
      const double a2 = std::norm(z);
      if (a2 == 0.0) continue;
      const double k = w->kabs[i];
      const double kap = k * k;
      const double rate = (std::conj(z) * (-kap * z + k1[c].c[i])).real();
      s.E += a2;
      s.D += kap * a2;
      s.dD += 2.0 * kap * rate;
      s.H += kap * k * a2;
      s.dH += 2.0 * kap * k * rate;
      s.hh += k * a2;
    }
  s.E *= L3, s.D *= L3, s.dD *= L3, s.H *= L3, s.dH *= L3;
  s.hh = std::sqrt(L3 * s.hh);
  return s;
}

}  // namespace

VectorField step_unchecked(const VectorField& u, double dt) { return rk4(u, neg_nonlinearity(u), dt); }

VectorField step(const VectorField& u, double dt, double cfl) {
  const double umax = max_abs_physical(u);
  const double limit = umax > 0.0 ? cfl * u.grid().dx() / umax : std::numeric_limits<double>::infinity();
  if (dt > limit) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "step: dt = %.6g violates the CFL bound; use dt <= %.6g", dt, limit);
    throw CflError(buf, limit);
  }
  return step_unchecked(u, dt);
}

void SolveTrace::write_csv(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << "t,energy,hhalf,dissipation,h32_sq_integral,dt,flag\n";
  char buf[512];
  for (std::size_t i = 0; i < times.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", times[i], energy[i], hhalf[i],
                  dissipation[i], h32_sq_integral[i], dt[i], flag[i]);
    os << buf;
  }
}

nlohmann::json SolveTrace::summary_json() const {
  double vmax = 0.0;
  for (double v : max_vorticity) vmax = std::max(vmax, v);
  return {{"blowup_flag", blowup_flag},
          {"blowup_reason", blowup_reason},
          {"early_exit", early_exit},
          {"final_time", final_time},
          {"steps", steps},
          {"max_divergence", max_divergence},
          {"energy_residual_rate", energy_residual_rate},
          {"hhalf_initial", hhalf.empty() ? 0.0 : hhalf.front()},
          {"hhalf_final", hhalf.empty() ? 0.0 : hhalf.back()},
          {"max_vorticity", vmax},
          {"config", config.to_json()}};
}

SolveTrace solve(const VectorField& u0, const SolverConfig& cfg) {
  if (!(cfg.T_end >= 0.0)) throw std::invalid_argument("solve: T_end must be >= 0");
  const GridSpec& g = u0.grid();
  const double dx = g.dx();
  SolveTrace tr;
  tr.config = cfg;
  std::vector<double> snaps = cfg.snapshot_times;
  std::sort(snaps.begin(), snaps.end());
  std::size_t next_snap = 0;

  VectorField u = u0;
  u.divergence_free = true;
  VectorField k1 = neg_nonlinearity(u);
  Sums s = spectral_sums(u, k1);
  const double E0 = s.E, hh0 = s.hh;
  double t = 0.0, Dint = 0.0, Hint = 0.0;
  int rows = 0;

  auto record = [&](double dt) {
    tr.times.push_back(t);
    tr.energy.push_back(s.E);
    tr.hhalf.push_back(s.hh);
    tr.dissipation.push_back(Dint);
    tr.h32_sq_integral.push_back(Hint);
    tr.dt.push_back(dt);
    tr.flag.push_back(tr.blowup_flag ? 1 : 0);
    const bool vort = cfg.vorticity_every > 0 && rows % cfg.vorticity_every == 0;
    tr.max_vorticity.push_back(vort ? max_vorticity(u) : std::nan(""));
    ++rows;
    if (t > 0.0 && E0 > 0.0)
      tr.energy_residual_rate = std::max(tr.energy_residual_rate, std::abs(s.E + 2.0 * Dint - E0) / (E0 * t));
  };
  auto take_snapshots = [&]() {
    while (next_snap < snaps.size() && snaps[next_snap] <= t * (1.0 + 1e-12) + 1e-300) {
      tr.snapshot_times.push_back(snaps[next_snap]);
      if (cfg.keep_snapshots) tr.snapshots.push_back(u);
      if (!cfg.checkpoint_prefix.empty())
        write_field(cfg.checkpoint_prefix + "_" + std::to_string(tr.snapshot_times.size() - 1) + ".fld", u);
      ++next_snap;
    }
  };

  tr.max_divergence = divergence_defect(u);
  record(0.0);
  take_snapshots();
  while (t < cfg.T_end * (1.0 - 1e-14)) {
    const double umax = max_abs_physical(u);
    const double dt_cfl = umax > 0.0 ? cfg.cfl * dx / umax : std::numeric_limits<double>::infinity();
    if (dt_cfl < cfg.dt_floor) {
      tr.blowup_flag = true;
      tr.blowup_reason = "CFL step fell below dt_floor";
      tr.flag.back() = 1;
      break;
    }
    double stop = cfg.T_end;
    if (next_snap < snaps.size()) stop = std::min(stop, snaps[next_snap]);
    double dt;
    if (cfg.dt_fixed > 0.0) {
      const double base = std::min(cfg.dt_fixed, dt_cfl);
      const double count = std::ceil((stop - t) / base - 1e-9);
      dt = (stop - t) / std::max(count, 1.0);
    } else {
      dt = std::min(cfg.dt_max, dt_cfl);
      if (t + dt >= stop * (1.0 - 1e-12)) dt = stop - t;
    }
    const bool lands = t + dt >= stop * (1.0 - 1e-12);
    VectorField un = rk4(u, k1, dt);
    VectorField k1n = neg_nonlinearity(un);
    Sums sn = spectral_sums(un, k1n);
    // End-corrected trapezoid, fourth order in dt.
    Dint += 0.5 * dt * (s.D + sn.D) - dt * dt / 12.0 * (sn.dD - s.dD);
    Hint += 0.5 * dt * (s.H + sn.H) - dt * dt / 12.0 * (sn.dH - s.dH);
    u = std::move(un);
    k1 = std::move(k1n);
    s = sn;
    t = lands ? stop : t + dt;
    ++tr.steps;
    tr.max_divergence = std::max(tr.max_divergence, divergence_defect(u));
    if (hh0 > 0.0 && s.hh > cfg.blowup_factor * hh0) {
      tr.blowup_flag = true;
      tr.blowup_reason = "H^{1/2} norm exceeded blowup_factor times its initial value";
    }
    record(dt);
    take_snapshots();
    if (tr.blowup_flag) break;
    if (cfg.early_exit_fraction > 0.0 && hh0 > 0.0 && s.hh < cfg.early_exit_fraction * hh0) {
      tr.early_exit = true;
      break;
    }
  }
  tr.final_time = t;
  tr.final_state = std::move(u);
  return tr;
}

double duhamel_residual(const std::vector<VectorField>& snapshots, const VectorField& u0, const TimeGrid& tg) {
  if (snapshots.size() != tg.size()) throw std::invalid_argument("duhamel_residual: need one snapshot per node");
  const GridSpec& g = u0.grid();
  FieldSeries F(g, tg.size());
  for (std::size_t i = 0; i < tg.size(); ++i) {
    VectorField s = snapshots[i];
    s.divergence_free = true;
    F.set(i, ns_nonlinearity(s));
  }
  VectorField a = u0;
  a.divergence_free = true;
  F.set_initial(ns_nonlinearity(a));
  const FieldSeries I = duhamel_integral(F, tg);
  double worst = 0.0;
  for (std::size_t i = 0; i < tg.size(); ++i) {
    VectorField r = snapshots[i];
    r -= heat_flow(u0, tg.t[i]);
    r += I.get(i);
    const double num = l2_norm(r);
    const double den = l2_norm(snapshots[i]);
    if (num == 0.0) continue;
    worst = std::max(worst, den > 0.0 ? num / den : std::numeric_limits<double>::infinity());
  }
  return worst;
}

}  // namespace nswp
