#include "nswp/littlewood_paley.hpp"

#include <cmath>
#include <string>

#include "nswp/fft.hpp"
#include "nswp/simd.hpp"

namespace nswp {

std::vector<int> DyadicFamily::bands() const {
  std::vector<int> out;
  for (int j = j_min; j <= j_max; ++j) out.push_back(j);
  return out;
}

double DyadicFamily::phi_hat(int j, double r) { return simd::ramp(std::ldexp(r, -j)); }

double DyadicFamily::psi(int j, double r) { return phi_hat(j + 1, r) - phi_hat(j, r); }

DyadicFamily build_family(const GridSpec& g) {
  g.validate();
  DyadicFamily fam;
  fam.grid = g;
  fam.j_min = int(std::ceil(std::log2(g.k0()) - 1e-12)) - 1;
  fam.j_max = int(std::floor(std::log2(g.cutoff()) + 1e-12));
  if (fam.band_count() < 4)
    throw GridError("dyadic family: only " + std::to_string(fam.band_count()) +
                    " bands fit on this grid (need 4)");
  fam.waves = wavenumbers(g);
  return fam;
}

namespace {

void check_grid(const DyadicFamily& fam, const GridSpec& g) {
  if (!fam.grid.same_as(g)) throw GridError("dyadic family built for a different grid");
}

void apply(const DyadicFamily& fam, const ScalarField& f, cplx* out, double a_outer, double a_inner) {
  simd::kernels().radial_band(out, f.c.data(), fam.waves->kabs.data(), f.c.size(), a_outer, a_inner);
}

void check_band(const DyadicFamily& fam, int j, int top) {
  if (j < fam.j_min || j > top)
    throw std::out_of_range("band " + std::to_string(j) + " outside [" + std::to_string(fam.j_min) +
                            ", " + std::to_string(top) + "]");
}

}  // namespace

ScalarField block(const DyadicFamily& fam, const ScalarField& f, int j) {
  check_grid(fam, f.grid);
  check_band(fam, j, fam.j_max);
  ScalarField out(f.grid, f.real_valued);
  apply(fam, f, out.c.data(), std::ldexp(1.0, -(j + 1)), std::ldexp(1.0, -j));
  return out;
}

VectorField block(const DyadicFamily& fam, const VectorField& v, int j) {
  VectorField out;
  for (int i = 0; i < 3; ++i) out.comp[i] = block(fam, v[i], j);
  out.divergence_free = v.divergence_free;
  return out;
}

ScalarField lowpass(const DyadicFamily& fam, const ScalarField& f, int j) {
  check_grid(fam, f.grid);
  check_band(fam, j, fam.j_max + 1);
  ScalarField out(f.grid, f.real_valued);
  apply(fam, f, out.c.data(), std::ldexp(1.0, -j), 0.0);
  return out;
}

VectorField lowpass(const DyadicFamily& fam, const VectorField& v, int j) {
  VectorField out;
  for (int i = 0; i < 3; ++i) out.comp[i] = lowpass(fam, v[i], j);
  out.divergence_free = v.divergence_free;
  return out;
}

CVec block_physical(const DyadicFamily& fam, const ScalarField& f, int j) {
  check_grid(fam, f.grid);
  check_band(fam, j, fam.j_max);
  CVec out(f.c.size());
  apply(fam, f, out.data(), std::ldexp(1.0, -(j + 1)), std::ldexp(1.0, -j));
  fft::backward(out.data(), f.grid.n);
  return out;
}

}  // namespace nswp
