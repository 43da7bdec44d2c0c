#include "nswp/time_grid.hpp"

#include <cmath>
#include <stdexcept>

namespace nswp {

TimeGrid TimeGrid::make(double t_min, double t_max, int nodes_per_octave) {
  if (!(t_min > 0.0) || !(t_max > t_min)) throw std::invalid_argument("time grid: need 0 < t_min < t_max");
  if (nodes_per_octave < 1) throw std::invalid_argument("time grid: nodes_per_octave >= 1");
  TimeGrid tg;
  tg.nodes_per_octave = nodes_per_octave;
  tg.rho = std::exp2(1.0 / nodes_per_octave);
  // Integer exponents keep nodes exact powers of two on octave boundaries.
  const int count = int(std::ceil(std::log2(t_max / t_min) * nodes_per_octave - 1e-9));
  for (int i = 0; i <= count; ++i) tg.t.push_back(t_min * std::exp2(double(i) / nodes_per_octave));
  return tg;
}

TimeGrid TimeGrid::for_grid(const GridSpec& g, int nodes_per_octave) {
  const int j_max = int(std::floor(std::log2(g.cutoff()) + 1e-12));
  const double t_min = std::exp2(-2.0 * j_max - 4.0);
  const double t_max = std::exp2(std::ceil(std::log2(g.L * g.L) - 1e-12));
  return make(t_min, t_max, nodes_per_octave);
}

double TimeGrid::h() const { return std::log(rho); }

bool TimeGrid::same_as(const TimeGrid& o) const {
  if (t.size() != o.t.size() || nodes_per_octave != o.nodes_per_octave) return false;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (std::abs(t[i] - o.t[i]) > 1e-14 * t[i]) return false;
  return true;
}

TimeGrid TimeGrid::scaled(double s) const {
  TimeGrid out(*this);
  for (auto& x : out.t) x *= s;
  return out;
}

namespace {

std::vector<double> trapezoid(const std::vector<double>& t, double h, double power) {
  std::vector<double> w(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    w[i] = h * std::pow(t[i], power);
    if (i == 0 || i + 1 == t.size()) w[i] *= 0.5;
  }
  return w;
}

}  // namespace

std::vector<double> TimeGrid::weights_dt() const {
  auto w = trapezoid(t, h(), 1.0);
  w[0] += t[0];
  return w;
}

std::vector<double> TimeGrid::weights_tdt() const {
  auto w = trapezoid(t, h(), 2.0);
  w[0] += 0.5 * t[0] * t[0];
  return w;
}

std::vector<double> TimeGrid::weights_dt_over_t(double a) const {
  if (!(a > 0.0)) throw std::invalid_argument("dt/t weights need a positive head exponent");
  auto w = trapezoid(t, h(), 0.0);
  w[0] += 1.0 / a;
  return w;
}

std::vector<double> TimeGrid::weights_dt_upto(double T) const {
  std::vector<double> w(t.size(), 0.0);
  if (T <= 0.0) return w;
  if (T <= t[0]) {
    w[0] = T;
    return w;
  }
  w[0] = t[0];
  const double hh = h();
  std::size_t i = 0;
  while (i + 1 < t.size() && t[i + 1] <= T) {
    w[i] += 0.5 * hh * t[i];
    w[i + 1] += 0.5 * hh * t[i + 1];
    ++i;
  }
  if (i + 1 < t.size() && T > t[i]) {
    // Partial cell [t_i, T]: integrand G(u) = g(e^u) e^u linear in u across the cell.
    const double d = std::log(T / t[i]);
    const double theta = d / hh;
    // int_0^d (G_i (1 - s/hh) + G_{i+1} s/hh) ds
    w[i] += t[i] * (d - 0.5 * d * theta);
    w[i + 1] += t[i + 1] * 0.5 * d * theta;
  }
  return w;
}

std::vector<double> TimeGrid::cumulative(const std::vector<double>& g) const {
  if (g.size() != t.size()) throw std::invalid_argument("cumulative: size mismatch");
  std::vector<double> c(g.size());
  const double hh = h();
  c[0] = g[0] * t[0];
  for (std::size_t i = 1; i < g.size(); ++i) c[i] = c[i - 1] + 0.5 * hh * (g[i - 1] * t[i - 1] + g[i] * t[i]);
  return c;
}

double TimeGrid::tail_share(const std::vector<double>& g, const std::vector<double>& w) const {
  double tot = 0.0, tail = 0.0;
  for (std::size_t i = 0; i < g.size() && i < w.size(); ++i) {
    tot += w[i] * g[i];
    if (t[i] > 0.1 * t.back()) tail += w[i] * g[i];
  }
  return tot != 0.0 ? tail / tot : 0.0;
}

}  // namespace nswp
