#pragma once
// Inner loops shared by every spectral pipeline. Each kernel has a scalar
// reference and an AVX2 variant; the variant is picked once at startup.

#include <complex>
#include <cstddef>

namespace nswp::simd {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2 };

Isa detected_isa();
Isa active_isa();
// Test hook; ignored (stays scalar) when the CPU lacks AVX2.
void force_isa(Isa isa);
const char* isa_name(Isa isa);

// Smooth C2 ramp used by the dyadic multipliers: 1 on [0,1], 0 on [2,inf).
inline double ramp(double rho) {
  double x = rho - 1.0;
  x = x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x);
  return 1.0 - x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}

struct Kernels {
  // c[i] *= s * v[i]
  void (*scale_row)(cplx* c, const double* v, double s, std::size_t n);
  // out[i] = in[i] * (ramp(r[i]*a_outer) - ramp(r[i]*a_inner)); a_inner <= 0 means lowpass only
  void (*radial_band)(cplx* out, const cplx* in, const double* r, std::size_t n,
                      double a_outer, double a_inner);
  double (*max_abs)(const cplx* a, std::size_t n);
  double (*max_norm3)(const cplx* a, const cplx* b, const cplx* c, std::size_t n);
  double (*sum_abs2)(const cplx* a, std::size_t n);
  double (*sum_abs3)(const cplx* a, std::size_t n);
  void (*mul)(cplx* out, const cplx* a, const cplx* b, std::size_t n);
  // Leray projection of one k3-row: k1, k2 fixed, k3 varies along the row.
  void (*leray_row)(cplx* u1, cplx* u2, cplx* u3, double k1, double k2, const double* k3,
                    std::size_t n);
};

const Kernels& scalar_kernels();
const Kernels& avx2_kernels();  // only valid when detected_isa() == avx2
const Kernels& kernels();       // active set

}  // namespace nswp::simd
