#include "nswp/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nswp/fft.hpp"
#include "nswp/operators.hpp"
#include "nswp/simd.hpp"

namespace nswp {

namespace {

nlohmann::json exponent_json(double p) {
  if (std::isinf(p)) return "inf";
  return p;
}

void check_exponent(double p, const char* what) {
  if (!(p >= 1.0)) throw std::invalid_argument(std::string(what) + " must lie in [1, inf]");
}

double aggregate(const std::vector<double>& v, double q) {
  if (std::isinf(q)) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
  }
  double s = 0.0;
  for (double x : v) s += std::pow(x, q);
  return std::pow(s, 1.0 / q);
}

double norm_of(const std::array<CVec, 3>& p, int ncomp, const GridSpec& g, double pexp) {
  const CVec* ptrs[3] = {&p[0], &p[1], &p[2]};
  return lp_norm_samples(ptrs, ncomp, g, pexp);
}

}  // namespace

double lp_norm_samples(const CVec* const* comps, int ncomp, const GridSpec& g, double p) {
  check_exponent(p, "p");
  const auto& K = simd::kernels();
  const std::size_t N = comps[0]->size();
  if (ncomp != 1 && ncomp != 3) throw std::invalid_argument("lp norm: 1 or 3 components");
  if (std::isinf(p)) {
    if (ncomp == 1) return K.max_abs(comps[0]->data(), N);
    return K.max_norm3(comps[0]->data(), comps[1]->data(), comps[2]->data(), N);
  }
  const double dx3 = g.dx() * g.dx() * g.dx();
  double s = 0.0;
  if (ncomp == 1 && p == 2.0) {
    s = K.sum_abs2(comps[0]->data(), N);
  } else if (ncomp == 1 && p == 3.0) {
    s = K.sum_abs3(comps[0]->data(), N);
  } else {
    for (std::size_t i = 0; i < N; ++i) {
      double r2 = 0.0;
      for (int c = 0; c < ncomp; ++c) r2 += std::norm((*comps[c])[i]);
      s += p == 2.0 ? r2 : std::pow(r2, 0.5 * p);
    }
  }
  return std::pow(dx3 * s, 1.0 / p);
}

double lp_norm(const ScalarField& f, double p) {
  CVec x = to_physical(f);
  const CVec* ptr = &x;
  return lp_norm_samples(&ptr, 1, f.grid, p);
}

double lp_norm(const VectorField& v, double p) {
  std::array<CVec, 3> x{to_physical(v[0]), to_physical(v[1]), to_physical(v[2])};
  return norm_of(x, 3, v.grid(), p);
}

nlohmann::json BesovReport::to_json() const {
  nlohmann::json j;
  j["value"] = value;
  j["method"] = method == BesovMethod::lp ? "lp" : "heat";
  j["params"] = {{"s", s}, {"p", exponent_json(p)}, {"q", exponent_json(q)}};
  j["mean_dropped"] = mean_dropped;
  if (method == BesovMethod::lp) {
    nlohmann::json pb = nlohmann::json::object();
    for (std::size_t i = 0; i < bands.size(); ++i) pb[std::to_string(bands[i])] = per_band[i];
    j["per_band"] = pb;
  } else {
    j["times"] = times;
    j["per_time"] = per_time;
  }
  return j;
}

namespace {

BesovReport besov_lp_impl(const DyadicFamily& fam, const ScalarField* comps, int ncomp, double s,
                          double p, double q) {
  check_exponent(p, "p");
  check_exponent(q, "q");
  if (fam.band_count() <= 0) throw std::invalid_argument("besov: empty band range");
  BesovReport r;
  r.method = BesovMethod::lp;
  r.s = s, r.p = p, r.q = q;
  for (int j = fam.j_min; j <= fam.j_max; ++j) {
    std::array<CVec, 3> x;
    for (int c = 0; c < ncomp; ++c) x[c] = block_physical(fam, comps[c], j);
    r.bands.push_back(j);
    r.per_band.push_back(std::exp2(j * s) * norm_of(x, ncomp, fam.grid, p));
  }
  r.value = aggregate(r.per_band, q);
  return r;
}

bool has_mean(const ScalarField& f) {
  double m = max_coeff(f);
  return m > 0.0 && std::abs(f.c[0]) > 1e-13 * m;
}

BesovReport besov_heat_impl(const ScalarField* comps, int ncomp, double s, double p, double q,
                            const TimeGrid& tg) {
  if (!(s < 0.0)) throw std::invalid_argument("besov_heat: requires s < 0");
  check_exponent(p, "p");
  check_exponent(q, "q");
  BesovReport r;
  r.method = BesovMethod::heat;
  r.s = s, r.p = p, r.q = q;
  std::array<ScalarField, 3> base;
  for (int c = 0; c < ncomp; ++c) {
    base[c] = comps[c];
    if (has_mean(base[c])) r.mean_dropped = true;
    base[c].c[0] = 0.0;
  }
  double peak = 0.0;
  for (std::size_t i = 0; i < tg.size(); ++i) {
    const double t = tg.t[i];
    double g = 0.0;
    if (peak == 0.0 || r.per_time.back() > 1e-15 * peak) {
      std::array<CVec, 3> x;
      for (int c = 0; c < ncomp; ++c) x[c] = to_physical(heat_flow(base[c], t));
      g = std::pow(t, -0.5 * s) * norm_of(x, ncomp, comps[0].grid, p);
    }
    peak = std::max(peak, g);
    r.times.push_back(t);
    r.per_time.push_back(g);
  }
  if (std::isinf(q)) {
    r.value = peak;
  } else {
    auto w = tg.weights_dt_over_t(-0.5 * s * q);
    double acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * std::pow(r.per_time[i], q);
    r.value = std::pow(acc, 1.0 / q);
  }
  return r;
}

}  // namespace

BesovReport besov_lp(const DyadicFamily& fam, const ScalarField& f, double s, double p, double q) {
  return besov_lp_impl(fam, &f, 1, s, p, q);
}

BesovReport besov_lp(const DyadicFamily& fam, const VectorField& v, double s, double p, double q) {
  return besov_lp_impl(fam, v.comp.data(), 3, s, p, q);
}

BesovReport besov_heat(const ScalarField& f, double s, double p, double q, const TimeGrid& tg) {
  return besov_heat_impl(&f, 1, s, p, q, tg);
}

BesovReport besov_heat(const VectorField& v, double s, double p, double q, const TimeGrid& tg) {
  return besov_heat_impl(v.comp.data(), 3, s, p, q, tg);
}

namespace {

SobolevResult sobolev_impl(const ScalarField* comps, int ncomp, double s) {
  const GridSpec& g = comps[0].grid;
  const auto w = wavenumbers(g);
  SobolevResult r;
  double acc = 0.0;
  for (int c = 0; c < ncomp; ++c) {
    const auto& f = comps[c];
    if (s < 0.0 && has_mean(f)) r.mean_dropped = true;
    for (std::size_t i = 0; i < f.c.size(); ++i) {
      const double k = w->kabs[i];
      if (k == 0.0) {
        if (s == 0.0) acc += std::norm(f.c[i]);
        continue;
      }
      acc += std::pow(k, 2.0 * s) * std::norm(f.c[i]);
    }
  }
  r.value = std::sqrt(g.L * g.L * g.L * acc);
  return r;
}

}  // namespace

SobolevResult sobolev_norm(const ScalarField& f, double s) { return sobolev_impl(&f, 1, s); }
SobolevResult sobolev_norm(const VectorField& v, double s) { return sobolev_impl(v.comp.data(), 3, s); }

// ---------------- E norm ----------------

nlohmann::json ENormReport::to_json() const {
  nlohmann::json t1 = nlohmann::json::object(), t2 = nlohmann::json::object();
  for (std::size_t i = 0; i < bands.size(); ++i) {
    t1[std::to_string(bands[i])] = term1_band[i];
    t2[std::to_string(bands[i])] = term2_band[i];
  }
  return {{"value", value},         {"term1", term1},           {"term2", term2},
          {"term1_per_band", t1},   {"term2_per_band", t2},     {"nodes_used", nodes_used},
          {"nodes_total", nodes_total}, {"tail_share", tail_share}};
}

ENormAccumulator::ENormAccumulator(const DyadicFamily& fam, const TimeGrid& tg)
    : fam_(fam), tg_(tg), M_(tg.size(), std::vector<double>(fam.band_count(), 0.0)) {}

void ENormAccumulator::add(std::size_t i, const VectorField& g) { add_samples(i, g.comp.data(), 3); }
void ENormAccumulator::add(std::size_t i, const ScalarField& g) { add_samples(i, &g, 1); }

void ENormAccumulator::add_samples(std::size_t i, const ScalarField* comps, int ncomp) {
  if (i >= tg_.size()) throw std::out_of_range("e_norm: node index");
  if (!comps[0].grid.same_as(fam_.grid)) throw GridError("e_norm: grid mismatch");
  const auto& K = simd::kernels();
  double cur = 0.0;
  for (int j = fam_.j_min; j <= fam_.j_max; ++j) {
    std::array<CVec, 3> x;
    double energy = 0.0;
    for (int c = 0; c < ncomp; ++c) {
      x[c].resize(comps[c].c.size());
      K.radial_band(x[c].data(), comps[c].c.data(), fam_.waves->kabs.data(), x[c].size(),
                    std::ldexp(1.0, -(j + 1)), std::ldexp(1.0, -j));
      energy += K.sum_abs2(x[c].data(), x[c].size());
    }
    double m = 0.0;
    if (energy > 0.0) {
      for (int c = 0; c < ncomp; ++c) fft::backward(x[c].data(), fam_.grid.n);
      m = norm_of(x, ncomp, fam_.grid, kInf);
    }
    M_[i][j - fam_.j_min] = m;
    cur = std::max(cur, m);
  }
  peak_ = std::max(peak_, cur);
  last_ = cur;
}

bool ENormAccumulator::decayed(double rel) const { return last_ <= rel * peak_; }

ENormReport ENormAccumulator::finish() const {
  ENormReport r;
  const auto w1 = tg_.weights_dt();
  const auto w2 = tg_.weights_tdt();
  const int nb = fam_.band_count();
  r.bands = fam_.bands();
  r.term1_band.assign(nb, 0.0);
  r.term2_band.assign(nb, 0.0);
  r.nodes_total = tg_.size();
  std::vector<double> per_node(tg_.size(), 0.0);
  for (std::size_t i = 0; i < tg_.size(); ++i) {
    bool any = false;
    for (int b = 0; b < nb; ++b) {
      const double scale = std::ldexp(1.0, -(fam_.j_min + b));
      const double m = M_[i][b];
      if (m != 0.0) any = true;
      r.term1_band[b] += w1[i] * scale * m;
      r.term2_band[b] += w2[i] * m * m;
      per_node[i] += scale * m;
    }
    if (any) r.nodes_used = i + 1;
  }
  for (int b = 0; b < nb; ++b) {
    r.term2_band[b] = std::ldexp(1.0, -(fam_.j_min + b)) * std::sqrt(r.term2_band[b]);
    r.term1 += r.term1_band[b];
    r.term2 += r.term2_band[b];
  }
  r.value = r.term1 + r.term2;
  r.tail_share = tg_.tail_share(per_node, w1);
  return r;
}

ENormReport e_norm(const DyadicFamily& fam, const TimeGrid& tg, const TimeFieldFn& g, double stop_rel) {
  ENormAccumulator acc(fam, tg);
  for (std::size_t i = 0; i < tg.size(); ++i) {
    acc.add(i, g(i, tg.t[i]));
    if (acc.decayed(stop_rel)) break;
  }
  return acc.finish();
}

// ---------------- U(t) ----------------

double weight_U(const VectorField& u0, double t) {
  const double m = max_abs_physical(heat_flow(u0, t));
  return m * m + t * m * m * m * m;
}

UReport integral_U(const VectorField& u0, const TimeGrid& tg) {
  UReport r;
  r.values.assign(tg.size(), 0.0);
  double peak = 0.0;
  for (std::size_t i = 0; i < tg.size(); ++i) {
    const double u = weight_U(u0, tg.t[i]);
    r.values[i] = u;
    peak = std::max(peak, u);
    if (u <= 1e-30 * peak || peak == 0.0) break;
  }
  r.cumulative = tg.cumulative(r.values);
  r.integral = r.cumulative.back();
  return r;
}

}  // namespace nswp
