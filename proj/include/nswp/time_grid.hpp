#pragma once
// Geometric time nodes t_i = t_min * rho^i on (0, t_max] with log-trapezoid weights.
//
// Every integral over (0, inf) is split as an analytic head on (0, t_0], the
// trapezoid rule in u = log t on [t_0, t_max], and a dropped tail. The head
// freezes the integrand at t_0 except for dt/t, where it assumes a power law.

#include <vector>

#include "nswp/spectral_core.hpp"

namespace nswp {

struct TimeGrid {
  std::vector<double> t;
  double rho = 2.0;
  int nodes_per_octave = 1;

  static TimeGrid make(double t_min, double t_max, int nodes_per_octave);
  // t_min: largest power of two <= 4^{-j_max}/16; t_max: smallest power of two >= L^2.
  static TimeGrid for_grid(const GridSpec& g, int nodes_per_octave = 2);

  std::size_t size() const { return t.size(); }
  double h() const;  // log step
  double t_min() const { return t.front(); }
  double t_max() const { return t.back(); }
  bool same_as(const TimeGrid& o) const;
  // Rescaled copy with nodes s * t_i.
  TimeGrid scaled(double s) const;

  // sum_i w_i g(t_i) ~ int_0^{t_max} g dt
  std::vector<double> weights_dt() const;
  // ~ int_0^{t_max} g t dt
  std::vector<double> weights_tdt() const;
  // ~ int_0^{t_max} g dt/t for g ~ t^a near 0 (a > 0)
  std::vector<double> weights_dt_over_t(double a) const;
  // ~ int_0^{T} g dt with T anywhere in (0, t_max]; linear interpolation in log t
  // on the cell containing T.
  std::vector<double> weights_dt_upto(double T) const;
  // C_i ~ int_0^{t_i} g dt
  std::vector<double> cumulative(const std::vector<double>& g) const;

  // Share of sum w_i g_i coming from the last decade t > t_max / 10.
  double tail_share(const std::vector<double>& g, const std::vector<double>& w) const;
};

}  // namespace nswp
