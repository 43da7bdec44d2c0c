#pragma once
// Hand-rolled generators and oracles shared by the unit tests.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include "nswp/operators.hpp"
#include "nswp/spectral_core.hpp"

namespace nswp::testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 r(20240611);
  return r;
}

inline double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng()); }

// Real scalar field with independent Gaussian modes on |k| <= kmax (Hermitian by construction).
inline ScalarField random_scalar(const GridSpec& g, double kmax, std::mt19937_64& r) {
  std::normal_distribution<double> N(0.0, 1.0);
  ScalarField f(g, true);
  const int mmax = int(std::floor(kmax / g.k0()));
  for (int a = -mmax; a <= mmax; ++a)
    for (int b = -mmax; b <= mmax; ++b)
      for (int c = -mmax; c <= mmax; ++c) {
        const double k = g.k0() * std::sqrt(double(a * a + b * b + c * c));
        if (k > kmax || k >= g.cutoff()) continue;
        // fill one of each +/- pair, mirror the conjugate
        if (std::make_tuple(a, b, c) < std::make_tuple(-a, -b, -c)) continue;
        cplx z(N(r), N(r));
        if (a == 0 && b == 0 && c == 0) z = {N(r), 0.0};
        f.at(a, b, c) = z;
        f.at(-a, -b, -c) = std::conj(z);
      }
  return f;
}

inline ScalarField random_scalar(const GridSpec& g, double kmax) { return random_scalar(g, kmax, rng()); }

inline VectorField random_solenoidal_field(const GridSpec& g, double kmax) {
  VectorField v(g, true);
  for (int i = 0; i < 3; ++i) v[i] = random_scalar(g, kmax);
  leray_project_inplace(v);
  for (int i = 0; i < 3; ++i) v[i].at(0, 0, 0) = 0.0;
  return v;
}

// Direct O(n^6) inverse DFT of the FFT-ordered coefficients at sample (a,b,c).
inline cplx direct_sample(const ScalarField& f, int a, int b, int c) {
  const GridSpec& g = f.grid;
  cplx s = 0.0;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        const double ph = 2.0 * M_PI * (double(i) * a + double(j) * b + double(k) * c) / g.n;
        s += f.c[g.index(i, j, k)] * std::polar(1.0, ph);
      }
  return s;
}

inline double rel_diff(const ScalarField& a, const ScalarField& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.c.size(); ++i) num += std::norm(a.c[i] - b.c[i]), den += std::norm(b.c[i]);
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

inline double rel_diff(const VectorField& a, const VectorField& b) {
  double num = 0.0, den = 0.0;
  for (int k = 0; k < 3; ++k)
    for (std::size_t i = 0; i < a[k].c.size(); ++i)
      num += std::norm(a[k].c[i] - b[k].c[i]), den += std::norm(b[k].c[i]);
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

// Taylor-Green vortex (divergence-free, real).
inline VectorField taylor_green(const GridSpec& g) {
  VectorField u(g, true);
  u[0] = sample(g, [](double x, double y, double z) { return std::sin(x) * std::cos(y) * std::cos(z); });
  u[1] = sample(g, [](double x, double y, double z) { return -std::cos(x) * std::sin(y) * std::cos(z); });
  u[2] = ScalarField(g, true);
  u.divergence_free = true;
  return u;
}

}  // namespace nswp::testing
