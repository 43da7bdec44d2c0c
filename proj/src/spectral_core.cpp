#include "nswp/spectral_core.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "nswp/fft.hpp"
#include "nswp/simd.hpp"

namespace nswp {

GridSpec GridSpec::make(int n, double L, double dealias_fraction) {
  GridSpec g;
  g.n = n;
  g.L = L;
  g.dealias_fraction = dealias_fraction;
  g.validate();
  return g;
}

void GridSpec::validate() const {
  if (n < 16 || (n & (n - 1)) != 0)
    throw GridError("grid: n must be a power of two >= 16, got " + std::to_string(n));
  if (!(L > 0.0) || !std::isfinite(L)) throw GridError("grid: box length must be positive");
  if (!(dealias_fraction > 0.0 && dealias_fraction <= 1.0))
    throw GridError("grid: dealias_fraction must lie in (0,1]");
}

bool GridSpec::same_as(const GridSpec& o) const {
  return n == o.n && L == o.L && dealias_fraction == o.dealias_fraction;
}

std::shared_ptr<const Wavenumbers> wavenumbers(const GridSpec& g) {
  static std::mutex mu;
  static std::map<std::tuple<int, double, double>, std::shared_ptr<const Wavenumbers>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(g.n, g.L, g.dealias_fraction);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  // Keep the cache bounded; large tables are cheap to rebuild.
  if (cache.size() > 12) cache.clear();
  auto w = std::make_shared<Wavenumbers>();
  const int n = g.n;
  w->k.resize(n);
  for (int i = 0; i < n; ++i) w->k[i] = g.wavenumber(i);
  w->kabs.resize(g.size());
  w->retain.resize(g.size());
  const double kc = g.cutoff();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        std::size_t id = g.index(a, b, c);
        double r = std::sqrt(w->k[a] * w->k[a] + w->k[b] * w->k[b] + w->k[c] * w->k[c]);
        w->kabs[id] = r;
        w->retain[id] = r < kc ? 1.0 : 0.0;
      }
  cache.emplace(key, w);
  return w;
}

// ---------------- ScalarField ----------------

ScalarField::ScalarField(const GridSpec& g, bool real) : grid(g), c(g.size()), real_valued(real) {}

cplx& ScalarField::at(int m1, int m2, int m3) {
  return c[grid.index(grid.slot(m1), grid.slot(m2), grid.slot(m3))];
}
const cplx& ScalarField::at(int m1, int m2, int m3) const {
  return c[grid.index(grid.slot(m1), grid.slot(m2), grid.slot(m3))];
}

static void require_same(const GridSpec& a, const GridSpec& b) {
  if (!a.same_as(b)) throw GridError("grid mismatch between operands");
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_same(grid, o.grid);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.c[i];
  real_valued = real_valued && o.real_valued;
  return *this;
}
ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_same(grid, o.grid);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] -= o.c[i];
  real_valued = real_valued && o.real_valued;
  return *this;
}
ScalarField& ScalarField::operator*=(double s) {
  for (auto& x : c) x *= s;
  return *this;
}
ScalarField& ScalarField::operator*=(cplx s) {
  for (auto& x : c) x *= s;
  if (s.imag() != 0.0) real_valued = false;
  return *this;
}
void ScalarField::axpy(double a, const ScalarField& x) {
  require_same(grid, x.grid);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += a * x.c[i];
  real_valued = real_valued && x.real_valued;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

// ---------------- VectorField ----------------

VectorField::VectorField(const GridSpec& g, bool real)
    : comp{ScalarField(g, real), ScalarField(g, real), ScalarField(g, real)} {}

VectorField& VectorField::operator+=(const VectorField& o) {
  for (int i = 0; i < 3; ++i) comp[i] += o.comp[i];
  divergence_free = divergence_free && o.divergence_free;
  return *this;
}
VectorField& VectorField::operator-=(const VectorField& o) {
  for (int i = 0; i < 3; ++i) comp[i] -= o.comp[i];
  divergence_free = divergence_free && o.divergence_free;
  return *this;
}
VectorField& VectorField::operator*=(double s) {
  for (auto& f : comp) f *= s;
  return *this;
}
void VectorField::axpy(double a, const VectorField& x) {
  for (int i = 0; i < 3; ++i) comp[i].axpy(a, x.comp[i]);
  divergence_free = divergence_free && x.divergence_free;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double s, VectorField a) { return a *= s; }

// ---------------- transforms ----------------

CVec to_physical(const ScalarField& f) {
  CVec out(f.c);
  fft::backward(out.data(), f.grid.n);
  return out;
}

ScalarField to_spectral(const GridSpec& g, CVec&& samples, bool real_valued) {
  if (samples.size() != g.size()) throw GridError("to_spectral: sample count mismatch");
  ScalarField f;
  f.grid = g;
  f.real_valued = real_valued;
  f.c = std::move(samples);
  fft::forward(f.c.data(), g.n);
  const double inv = 1.0 / double(g.size());
  for (auto& x : f.c) x *= inv;
  return f;
}

ScalarField to_spectral(const GridSpec& g, const CVec& samples, bool real_valued) {
  return to_spectral(g, CVec(samples), real_valued);
}

ScalarField sample(const GridSpec& g, const PointFn& fn) {
  CVec s(g.size());
  for (int a = 0; a < g.n; ++a) {
    double x = g.coord(a);
    for (int b = 0; b < g.n; ++b) {
      double y = g.coord(b);
      for (int c = 0; c < g.n; ++c) s[g.index(a, b, c)] = fn(x, y, g.coord(c));
    }
  }
  return to_spectral(g, std::move(s), true);
}

ScalarField derivative(const ScalarField& f, int axis) {
  if (axis < 1 || axis > 3) throw std::invalid_argument("derivative: axis must be 1, 2 or 3");
  const GridSpec& g = f.grid;
  const int n = g.n;
  ScalarField d(g, f.real_valued);
  const auto w = wavenumbers(g);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        int i = axis == 1 ? a : (axis == 2 ? b : c);
        // Nyquist plane has no conjugate partner; drop it.
        double k = (i == n / 2) ? 0.0 : w->k[i];
        std::size_t id = g.index(a, b, c);
        d.c[id] = cplx(0.0, k) * f.c[id];
      }
  return d;
}

void dealias(ScalarField& f) {
  const auto w = wavenumbers(f.grid);
  for (std::size_t i = 0; i < f.c.size(); ++i)
    if (w->retain[i] == 0.0) f.c[i] = 0.0;
}

void dealias(VectorField& v) {
  for (auto& f : v.comp) dealias(f);
}

ScalarField dealiased_product(const ScalarField& f, const ScalarField& g) {
  require_same(f.grid, g.grid);
  CVec a = to_physical(f);
  CVec b = to_physical(g);
  simd::kernels().mul(a.data(), a.data(), b.data(), a.size());
  ScalarField p = to_spectral(f.grid, std::move(a), f.real_valued && g.real_valued);
  dealias(p);
  return p;
}

ScalarField embed_compact(const Subcube& sub, const GridSpec& g) {
  if (sub.m <= 0 || sub.samples.size() != std::size_t(sub.m) * sub.m * sub.m)
    throw std::invalid_argument("embed_compact: sample count must be m^3");
  // margin >= side on every face: n >= 3 m
  if (3 * sub.m > g.n)
    throw GridError("embed_compact: subcube too large for box (need margin >= subcube side)");
  CVec s(g.size());
  const int h = sub.m / 2;
  for (int a = 0; a < sub.m; ++a)
    for (int b = 0; b < sub.m; ++b)
      for (int c = 0; c < sub.m; ++c)
        s[g.index(g.slot(a - h), g.slot(b - h), g.slot(c - h))] =
            sub.samples[(std::size_t(a) * sub.m + b) * sub.m + c];
  return to_spectral(g, std::move(s), true);
}

// ---------------- norms ----------------

double l2_norm(const ScalarField& f) {
  const double L3 = f.grid.L * f.grid.L * f.grid.L;
  return std::sqrt(L3 * simd::kernels().sum_abs2(f.c.data(), f.c.size()));
}

double l2_norm(const VectorField& v) {
  const double L3 = v.grid().L * v.grid().L * v.grid().L;
  double s = 0.0;
  for (const auto& f : v.comp) s += simd::kernels().sum_abs2(f.c.data(), f.c.size());
  return std::sqrt(L3 * s);
}

double l2_norm_physical(const CVec& samples, const GridSpec& g) {
  const double dx = g.dx();
  return std::sqrt(dx * dx * dx * simd::kernels().sum_abs2(samples.data(), samples.size()));
}

double inner_l2(const VectorField& a, const VectorField& b) {
  require_same(a.grid(), b.grid());
  const double L3 = a.grid().L * a.grid().L * a.grid().L;
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < a[i].c.size(); ++j) s += (std::conj(a[i].c[j]) * b[i].c[j]).real();
  return L3 * s;
}

double max_coeff(const ScalarField& f) { return simd::kernels().max_abs(f.c.data(), f.c.size()); }

double max_coeff(const VectorField& v) {
  return std::max({max_coeff(v[0]), max_coeff(v[1]), max_coeff(v[2])});
}

double hermitian_defect(const ScalarField& f) {
  const GridSpec& g = f.grid;
  const int n = g.n;
  double m = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        cplx x = f.c[g.index(a, b, c)];
        cplx y = f.c[g.index((n - a) % n, (n - b) % n, (n - c) % n)];
        m = std::max(m, std::abs(y - std::conj(x)));
      }
  double s = max_coeff(f);
  return s > 0.0 ? m / s : 0.0;
}

double divergence_defect(const VectorField& v) {
  const GridSpec& g = v.grid();
  const int n = g.n;
  const auto w = wavenumbers(g);
  double m = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        std::size_t id = g.index(a, b, c);
        cplx d = w->k[a] * v[0].c[id] + w->k[b] * v[1].c[id] + w->k[c] * v[2].c[id];
        m = std::max(m, std::abs(d));
      }
  double s = max_coeff(v);
  return s > 0.0 ? m / s : 0.0;
}

double max_abs_physical(const ScalarField& f) {
  CVec p = to_physical(f);
  return simd::kernels().max_abs(p.data(), p.size());
}

double max_abs_physical(const VectorField& v) {
  CVec a = to_physical(v[0]), b = to_physical(v[1]), c = to_physical(v[2]);
  return simd::kernels().max_norm3(a.data(), b.data(), c.data(), a.size());
}

double beyond_cutoff_fraction(const ScalarField& f) {
  const auto w = wavenumbers(f.grid);
  double in = 0.0, out = 0.0;
  for (std::size_t i = 0; i < f.c.size(); ++i) (w->retain[i] != 0.0 ? in : out) += std::norm(f.c[i]);
  return (in + out) > 0.0 ? out / (in + out) : 0.0;
}

}  // namespace nswp
