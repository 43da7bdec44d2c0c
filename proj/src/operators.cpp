#include "nswp/operators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nswp/fft.hpp"
#include "nswp/simd.hpp"

namespace nswp {

namespace {

RVec heat_factors(const Wavenumbers& w, double t) {
  RVec e(w.k.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = std::exp(-t * w.k[i] * w.k[i]);
  return e;
}

void heat_apply(ScalarField& f, const RVec& e) {
  const int n = f.grid.n;
  const auto& K = simd::kernels();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) K.scale_row(f.c.data() + f.grid.index(a, b, 0), e.data(), e[a] * e[b], n);
}

void check_t(double t) {
  if (!(t >= 0.0)) throw std::domain_error("heat_flow: negative time");
}

void require_div_free(const VectorField& u, const char* who) {
  double d = divergence_defect(u);
  if (d > nonlinearity_div_tolerance(u.grid()))
    throw DivergenceError(std::string(who) + ": input is not divergence-free (defect " +
                          std::to_string(d) + ")");
}

// Transforms a physical product once and adds i k_axis * P to each target.
void accumulate_derivative(CVec&& phys, const GridSpec& g, const Wavenumbers& w, bool real,
                           ScalarField& acc_a, int axis_a, ScalarField* acc_b, int axis_b) {
  const int n = g.n;
  ScalarField p = to_spectral(g, std::move(phys), real);
  dealias(p);
  const double* ks[3];
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      ks[0] = &w.k[a];
      ks[1] = &w.k[b];
      const std::size_t row = g.index(a, b, 0);
      for (int c = 0; c < n; ++c) {
        const std::size_t id = row + c;
        if (p.c[id] == cplx(0.0, 0.0)) continue;
        ks[2] = &w.k[c];
        acc_a.c[id] += cplx(0.0, *ks[axis_a]) * p.c[id];
        if (acc_b) acc_b->c[id] += cplx(0.0, *ks[axis_b]) * p.c[id];
      }
    }
}

}  // namespace

ScalarField heat_flow(const ScalarField& f, double t) {
  check_t(t);
  ScalarField out(f);
  heat_apply(out, heat_factors(*wavenumbers(f.grid), t));
  return out;
}

void heat_flow_inplace(VectorField& v, double t) {
  check_t(t);
  RVec e = heat_factors(*wavenumbers(v.grid()), t);
  for (auto& f : v.comp) heat_apply(f, e);
}

VectorField heat_flow(const VectorField& v, double t) {
  VectorField out(v);
  heat_flow_inplace(out, t);
  return out;
}

void leray_project_inplace(VectorField& v) {
  const GridSpec& g = v.grid();
  const int n = g.n;
  const auto w = wavenumbers(g);
  const auto& K = simd::kernels();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      std::size_t row = g.index(a, b, 0);
      K.leray_row(v[0].c.data() + row, v[1].c.data() + row, v[2].c.data() + row, w->k[a], w->k[b],
                  w->k.data(), n);
    }
  v.divergence_free = true;
}

VectorField leray_project(const VectorField& v) {
  VectorField out(v);
  leray_project_inplace(out);
  return out;
}

ScalarField divergence(const ScalarField& v1, const ScalarField& v2, const ScalarField& v3) {
  ScalarField d = derivative(v1, 1);
  d += derivative(v2, 2);
  d += derivative(v3, 3);
  return d;
}

ScalarField divergence(const VectorField& v) { return divergence(v[0], v[1], v[2]); }

VectorField gradient(const ScalarField& f) {
  VectorField g;
  for (int i = 0; i < 3; ++i) g.comp[i] = derivative(f, i + 1);
  return g;
}

VectorField curl(const VectorField& a) {
  VectorField c;
  c.comp[0] = derivative(a[2], 2) - derivative(a[1], 3);
  c.comp[1] = derivative(a[0], 3) - derivative(a[2], 1);
  c.comp[2] = derivative(a[1], 1) - derivative(a[0], 2);
  c.divergence_free = true;
  return c;
}

double nonlinearity_div_tolerance(const GridSpec& g) { return 1e-8 * std::max(1.0, g.cutoff()); }

VectorField ns_nonlinearity(const VectorField& u) {
  require_div_free(u, "ns_nonlinearity");
  const GridSpec& g = u.grid();
  const auto w = wavenumbers(g);
  const auto& K = simd::kernels();
  const bool real = u[0].real_valued && u[1].real_valued && u[2].real_valued;
  std::array<CVec, 3> p{to_physical(u[0]), to_physical(u[1]), to_physical(u[2])};
  VectorField out(g, real);
  for (int l = 0; l < 3; ++l)
    for (int i = l; i < 3; ++i) {
      CVec prod(g.size());
      K.mul(prod.data(), p[l].data(), p[i].data(), prod.size());
      // d_l(u^l u^i) feeds component i, d_i(u^i u^l) feeds component l.
      accumulate_derivative(std::move(prod), g, *w, real, out.comp[i], l, l == i ? nullptr : &out.comp[l], i);
    }
  leray_project_inplace(out);
  return out;
}

VectorField ns_bilinear(const VectorField& a, const VectorField& b) {
  require_div_free(a, "ns_bilinear");
  require_div_free(b, "ns_bilinear");
  const GridSpec& g = a.grid();
  if (!g.same_as(b.grid())) throw GridError("ns_bilinear: grid mismatch");
  const auto w = wavenumbers(g);
  const auto& K = simd::kernels();
  const bool real = a[0].real_valued && a[1].real_valued && a[2].real_valued && b[0].real_valued &&
                    b[1].real_valued && b[2].real_valued;
  std::array<CVec, 3> pa{to_physical(a[0]), to_physical(a[1]), to_physical(a[2])};
  std::array<CVec, 3> pb{to_physical(b[0]), to_physical(b[1]), to_physical(b[2])};
  VectorField out(g, real);
  CVec tmp(g.size());
  for (int l = 0; l < 3; ++l)
    for (int i = l; i < 3; ++i) {
      CVec prod(g.size());
      K.mul(prod.data(), pa[l].data(), pb[i].data(), prod.size());
      K.mul(tmp.data(), pb[l].data(), pa[i].data(), tmp.size());
      for (std::size_t q = 0; q < prod.size(); ++q) prod[q] += tmp[q];
      accumulate_derivative(std::move(prod), g, *w, real, out.comp[i], l, l == i ? nullptr : &out.comp[l], i);
    }
  leray_project_inplace(out);
  return out;
}

VectorField convective_product(const VectorField& u) {
  const GridSpec& g = u.grid();
  const auto& K = simd::kernels();
  const bool real = u[0].real_valued && u[1].real_valued && u[2].real_valued;
  std::array<CVec, 3> p{to_physical(u[0]), to_physical(u[1]), to_physical(u[2])};
  VectorField out(g, real);
  CVec tmp(g.size());
  for (int i = 0; i < 3; ++i) {
    CVec acc(g.size());
    for (int l = 0; l < 3; ++l) {
      CVec d = to_physical(derivative(u[i], l + 1));
      K.mul(tmp.data(), p[l].data(), d.data(), tmp.size());
      for (std::size_t q = 0; q < acc.size(); ++q) acc[q] += tmp[q];
    }
    out.comp[i] = to_spectral(g, std::move(acc), real);
    dealias(out.comp[i]);
  }
  return out;
}

VectorField first_iterate(const VectorField& u0, double t) {
  VectorField uf = heat_flow(u0, t);
  uf.divergence_free = u0.divergence_free;
  return ns_nonlinearity(uf);
}

}  // namespace nswp
