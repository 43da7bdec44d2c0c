#include "nswp/fractal_transform.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nswp/fft.hpp"
#include "nswp/littlewood_paley.hpp"
#include "nswp/operators.hpp"

namespace nswp {

namespace {

constexpr double kTwoPi = 6.283185307179586476925;

double dist(const Point3& a, const Point3& b) {
  return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) + (a[2] - b[2]) * (a[2] - b[2]));
}

double boundary_distance(const Point3& x) {
  return std::min({0.5 - std::abs(x[0]), 0.5 - std::abs(x[1]), 0.5 - std::abs(x[2])});
}

bool power_of_two(int v) { return v >= 1 && (v & (v - 1)) == 0; }

}  // namespace

nlohmann::json TransformSpec::to_json() const {
  nlohmann::json c = nlohmann::json::array();
  for (const auto& x : centers) c.push_back({x[0], x[1], x[2]});
  return {{"lambda", Lambda}, {"centers", c}, {"delta", delta}};
}

TransformSpec TransformSpec::from_json(const nlohmann::json& j) {
  TransformSpec s;
  s.Lambda = j.at("lambda").get<int>();
  s.delta = j.at("delta").get<double>();
  for (const auto& c : j.at("centers")) s.centers.push_back({c.at(0).get<double>(), c.at(1).get<double>(), c.at(2).get<double>()});
  return s;
}

std::vector<SpecViolation> validate_spec(const TransformSpec& spec) {
  std::vector<SpecViolation> out;
  auto add = [&](const char* code, const std::string& msg) { out.push_back({code, msg}); };
  if (spec.centers.empty()) add("empty", "no centers");
  if (!power_of_two(spec.Lambda))
    add("lambda_power_of_two", "Lambda = " + std::to_string(spec.Lambda) + " is not a power of two");
  if (!(spec.delta > 0.0)) add("delta", "delta must be positive");
  const double tol = 1e-12;
  if (spec.delta > 0.0 && spec.Lambda < 4.0 / spec.delta * (1.0 - tol)) {
    std::ostringstream os;
    os << "Lambda = " << spec.Lambda << " is below 4/delta = " << 4.0 / spec.delta;
    add("lambda_threshold", os.str());
  }
  for (std::size_t a = 0; a < spec.centers.size(); ++a) {
    const double bd = boundary_distance(spec.centers[a]);
    if (bd < spec.delta * (1.0 - tol)) {
      std::ostringstream os;
      os << "center " << a << " lies " << bd << " from the cube boundary (< delta = " << spec.delta << ")";
      add("boundary_distance", os.str());
    }
    for (std::size_t b = a + 1; b < spec.centers.size(); ++b) {
      const double d = dist(spec.centers[a], spec.centers[b]);
      if (d < spec.delta * (1.0 - tol)) {
        std::ostringstream os;
        os << "centers " << a << " and " << b << " are " << d << " apart (< delta = " << spec.delta << ")";
        add("pairwise_separation", os.str());
      }
    }
  }
  return out;
}

double measured_delta(const std::vector<Point3>& centers) {
  double d = 0.5;
  for (std::size_t a = 0; a < centers.size(); ++a) {
    d = std::min(d, boundary_distance(centers[a]));
    for (std::size_t b = a + 1; b < centers.size(); ++b) d = std::min(d, dist(centers[a], centers[b]));
  }
  return d;
}

TransformSpec lattice_spec(int K, int Lambda, double step) {
  if (K < 1) throw std::invalid_argument("lattice_spec: K >= 1");
  std::vector<Point3> c;
  if (K == 1) {
    c.push_back({0.0, 0.0, 0.0});
  } else if (K == 2) {
    const double a = 0.5 / (1.0 + 2.0 * std::sqrt(3.0));
    c = {{a, a, a}, {-a, -a, -a}};
  } else if (K == 4) {
    const double a = 0.5 / (1.0 + 2.0 * std::sqrt(2.0));
    c = {{a, a, a}, {a, -a, -a}, {-a, a, -a}, {-a, -a, a}};
  } else if (K == 8) {
    const double a = 1.0 / 6.0;
    for (int s = 0; s < 8; ++s) c.push_back({s & 1 ? a : -a, s & 2 ? a : -a, s & 4 ? a : -a});
  } else {
    int m = 1;
    while (m * m * m < K) ++m;
    const double s = 1.0 / (m + 1);
    for (int i = 0; i < m && int(c.size()) < K; ++i)
      for (int j = 0; j < m && int(c.size()) < K; ++j)
        for (int k = 0; k < m && int(c.size()) < K; ++k)
          c.push_back({(i + 1) * s - 0.5, (j + 1) * s - 0.5, (k + 1) * s - 0.5});
  }
  if (step > 0.0)
    for (auto& x : c)
      for (auto& v : x) v = std::round(v / step) * step;
  TransformSpec spec;
  spec.Lambda = Lambda;
  spec.centers = c;
  spec.delta = measured_delta(c);
  return spec;
}

GridSpec source_grid(const GridSpec& target, int Lambda) {
  return GridSpec::make(target.n, target.L * Lambda, target.dealias_fraction);
}

double mass_in_cube(const ScalarField& f, double half) {
  const GridSpec& g = f.grid;
  CVec x = to_physical(f);
  double in = 0.0, tot = 0.0;
  for (int a = 0; a < g.n; ++a)
    for (int b = 0; b < g.n; ++b)
      for (int c = 0; c < g.n; ++c) {
        const double m = std::norm(x[g.index(a, b, c)]);
        tot += m;
        if (std::abs(g.coord(a)) < half && std::abs(g.coord(b)) < half && std::abs(g.coord(c)) < half) in += m;
      }
  return tot > 0.0 ? in / tot : 1.0;
}

double mass_in_cube(const VectorField& v, double half) {
  double in = 0.0, tot = 0.0;
  for (const auto& f : v.comp) {
    const double e = l2_norm(f);
    in += mass_in_cube(f, half) * e * e;
    tot += e * e;
  }
  return tot > 0.0 ? in / tot : 1.0;
}

double mass_in_ball(const VectorField& v, double radius) {
  const GridSpec& g = v.grid();
  double in = 0.0, tot = 0.0;
  for (const auto& f : v.comp) {
    CVec x = to_physical(f);
    for (int a = 0; a < g.n; ++a)
      for (int b = 0; b < g.n; ++b)
        for (int c = 0; c < g.n; ++c) {
          const double m = std::norm(x[g.index(a, b, c)]);
          const double r2 = g.coord(a) * g.coord(a) + g.coord(b) * g.coord(b) + g.coord(c) * g.coord(c);
          tot += m;
          if (r2 <= radius * radius) in += m;
        }
  }
  return tot > 0.0 ? in / tot : 1.0;
}

namespace {

// Energy at |k| >= 0.9 cutoff: a field that is not resolved on its own grid.
double edge_energy(const ScalarField& f) {
  const auto w = wavenumbers(f.grid);
  const double kc = 0.9 * f.grid.cutoff();
  double e = 0.0;
  for (std::size_t i = 0; i < f.c.size(); ++i)
    if (w->kabs[i] >= kc) e += std::norm(f.c[i]);
  return e;
}

void preflight(const ScalarField* comps, int ncomp, const TransformSpec& spec, const GridSpec& target,
               const TransformOptions& opt) {
  std::vector<std::string> issues;
  for (const auto& v : validate_spec(spec)) issues.push_back(v.code + ": " + v.message);
  const GridSpec src = source_grid(target, spec.Lambda);
  for (int c = 0; c < ncomp; ++c)
    if (!comps[c].grid.same_as(src))
      throw GridError("transform: input must live on the source grid (n, Lambda * L_target)");
  double in = 0.0, tot = 0.0, edge = 0.0;
  for (int c = 0; c < ncomp; ++c) {
    const double e = l2_norm(comps[c]);
    in += mass_in_cube(comps[c]) * e * e;
    tot += e * e;
    edge += edge_energy(comps[c]);
  }
  // pooled over components: a near-zero component must not count as unresolved
  double coeff_tot = 0.0;
  for (int c = 0; c < ncomp; ++c)
    for (const auto& z : comps[c].c) coeff_tot += std::norm(z);
  edge = coeff_tot > 0.0 ? edge / coeff_tot : 0.0;
  const double frac = tot > 0.0 ? in / tot : 1.0;
  if (frac < opt.support_mass) {
    std::ostringstream os;
    os << "support: " << frac << " of the L2 mass lies in Q (need " << opt.support_mass << ")";
    issues.push_back(os.str());
  }
  if (edge > 1e-8) {
    std::ostringstream os;
    os << "resolution: " << edge << " of the energy sits within 10% of the cutoff";
    issues.push_back(os.str());
  }
  if (opt.issues) opt.issues->insert(opt.issues->end(), issues.begin(), issues.end());
  if (opt.strict && !issues.empty()) throw TransformError(issues.front());
}

// Per-axis phase tables exp(-i k'_m x) for one center.
std::array<std::vector<cplx>, 3> phases(const GridSpec& target, const Point3& x) {
  std::array<std::vector<cplx>, 3> p;
  for (int d = 0; d < 3; ++d) {
    p[d].resize(target.n);
    for (int i = 0; i < target.n; ++i) p[d][i] = std::polar(1.0, -target.wavenumber(i) * x[d]);
  }
  return p;
}

ScalarField transform_component(const ScalarField& f, int Lambda, const std::vector<Point3>& centers,
                                const GridSpec& target) {
  const int n = target.n;
  CVec mult(target.size(), cplx(0.0, 0.0));
  for (const auto& x : centers) {
    auto p = phases(target, x);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const cplx ab = p[0][a] * p[1][b];
        cplx* row = mult.data() + target.index(a, b, 0);
        for (int c = 0; c < n; ++c) row[c] += ab * p[2][c];
      }
  }
  ScalarField out(target, f.real_valued);
  for (std::size_t i = 0; i < out.c.size(); ++i) out.c[i] = double(Lambda) * mult[i] * f.c[i];
  return out;
}

}  // namespace

ScalarField apply_transform(const ScalarField& f, const TransformSpec& spec, const GridSpec& target,
                            const TransformOptions& opt) {
  preflight(&f, 1, spec, target, opt);
  return transform_component(f, spec.Lambda, spec.centers, target);
}

VectorField apply_transform(const VectorField& f, const TransformSpec& spec, const GridSpec& target,
                            const TransformOptions& opt) {
  preflight(f.comp.data(), 3, spec, target, opt);
  VectorField out;
  for (int i = 0; i < 3; ++i) out.comp[i] = transform_component(f[i], spec.Lambda, spec.centers, target);
  out.divergence_free = f.divergence_free;
  return out;
}

VectorField apply_copy(const VectorField& f, int Lambda, const Point3& center, const GridSpec& target) {
  VectorField out;
  for (int i = 0; i < 3; ++i) out.comp[i] = transform_component(f[i], Lambda, {center}, target);
  out.divergence_free = f.divergence_free;
  return out;
}

nlohmann::json SandwichGap::to_json() const {
  return {{"norm_f", norm_f},       {"norm_Tf", norm_Tf},     {"deviation", deviation},
          {"lower_gap", lower_gap}, {"upper_gap", upper_gap}, {"bminus3_f", bminus3_f}};
}

SandwichGap besov_sandwich_gap(const VectorField& f, const TransformSpec& spec, double r,
                               const GridSpec& target, const TransformOptions& opt) {
  VectorField tf = apply_transform(f, spec, target, opt);
  const DyadicFamily fs = build_family(f.grid());
  const DyadicFamily ft = build_family(target);
  SandwichGap g;
  g.norm_f = besov_lp(fs, f, -1.0, kInf, r).value;
  g.norm_Tf = besov_lp(ft, tf, -1.0, kInf, r).value;
  g.deviation = g.norm_Tf - g.norm_f;
  g.lower_gap = g.deviation;
  g.upper_gap = -g.deviation;
  g.bminus3_f = besov_lp(fs, f, -3.0, kInf, kInf).value;
  return g;
}

double hminus1_contraction(const VectorField& f, const TransformSpec& spec, const GridSpec& target,
                           const TransformOptions& opt) {
  const double nf = sobolev_norm(f, -1.0).value;
  if (nf == 0.0) throw std::invalid_argument("hminus1_contraction: zero input has no defined ratio");
  VectorField tf = apply_transform(f, spec, target, opt);
  return sobolev_norm(tf, -1.0).value / nf;
}

nlohmann::json BilinearGap::to_json() const {
  return {{"transformed", transformed.to_json()}, {"original", original.to_json()}, {"gap", gap}};
}

namespace {

bool same_coeffs(const VectorField& a, const VectorField& b) {
  if (&a == &b) return true;
  if (!a.grid().same_as(b.grid())) return false;
  for (int i = 0; i < 3; ++i)
    if (a[i].c != b[i].c) return false;
  return true;
}

ENormReport product_enorm(const VectorField& f, const VectorField& g, bool same, int nodes_per_octave) {
  const GridSpec& grid = f.grid();
  const DyadicFamily fam = build_family(grid);
  const TimeGrid tg = TimeGrid::for_grid(grid, nodes_per_octave);
  return e_norm(fam, tg, [&](std::size_t, double t) {
    VectorField a = heat_flow(f, t);
    if (same) return ns_nonlinearity(a);
    VectorField b = heat_flow(g, t);
    VectorField q = ns_bilinear(a, b);
    q *= 0.5;
    return q;
  });
}

}  // namespace

BilinearGap bilinear_stability_gap(const VectorField& f, const VectorField& g, const TransformSpec& spec,
                                   const GridSpec& target, int nodes_per_octave, const TransformOptions& opt) {
  const bool same = same_coeffs(f, g);
  VectorField tf = apply_transform(f, spec, target, opt);
  VectorField tg = same ? tf : apply_transform(g, spec, target, opt);
  BilinearGap r;
  r.transformed = product_enorm(tf, tg, same, nodes_per_octave);
  r.original = product_enorm(f, g, same, nodes_per_octave);
  r.gap = r.transformed.value - r.original.value;
  return r;
}

CrossReport cross_interaction_norm(const CenterFlowsFn& flows, const TimeGrid& tg) {
  CrossReport r;
  r.integrand.assign(tg.size(), 0.0);
  for (std::size_t i = 0; i < tg.size(); ++i) {
    std::vector<VectorField> u = flows(i);
    if (u.size() < 2) continue;
    VectorField sum = u[0];
    for (std::size_t J = 1; J < u.size(); ++J) sum += u[J];
    sum.divergence_free = true;
    VectorField F = ns_nonlinearity(sum);
    for (const auto& uj : u) F -= ns_nonlinearity(uj);
    r.integrand[i] = sobolev_norm(F, -0.5).value;
  }
  const auto w = tg.weights_dt();
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * r.integrand[i] * r.integrand[i];
  r.value = std::sqrt(acc);
  return r;
}

}  // namespace nswp
