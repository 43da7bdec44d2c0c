#include "nswp/simd.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define NSWP_X86 1
#endif

namespace nswp::simd {

namespace {

// ---------- scalar reference ----------

void scale_row_s(cplx* c, const double* v, double s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) c[i] *= s * v[i];
}

void radial_band_s(cplx* out, const cplx* in, const double* r, std::size_t n, double ao,
                   double ai) {
  if (ai <= 0.0) {
    for (std::size_t i = 0; i < n; ++i) out[i] = in[i] * ramp(r[i] * ao);
  } else {
    for (std::size_t i = 0; i < n; ++i) out[i] = in[i] * (ramp(r[i] * ao) - ramp(r[i] * ai));
  }
}

double max_abs_s(const cplx* a, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::norm(a[i]));
  return std::sqrt(m);
}

double max_norm3_s(const cplx* a, const cplx* b, const cplx* c, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::norm(a[i]) + std::norm(b[i]) + std::norm(c[i]));
  return std::sqrt(m);
}

double sum_abs2_s(const cplx* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::norm(a[i]);
  return s;
}

double sum_abs3_s(const cplx* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double q = std::norm(a[i]);
    s += q * std::sqrt(q);
  }
  return s;
}

void mul_s(cplx* out, const cplx* a, const cplx* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double ar = a[i].real(), ai = a[i].imag(), br = b[i].real(), bi = b[i].imag();
    out[i] = cplx(ar * br - ai * bi, ai * br + ar * bi);
  }
}

void leray_row_s(cplx* u1, cplx* u2, cplx* u3, double k1, double k2, const double* k3,
                 std::size_t n) {
  double k12 = k1 * k1 + k2 * k2;
  for (std::size_t i = 0; i < n; ++i) {
    double kk = k12 + k3[i] * k3[i];
    if (kk == 0.0) continue;
    cplx d = (k1 * u1[i] + k2 * u2[i] + k3[i] * u3[i]) / kk;
    u1[i] -= k1 * d;
    u2[i] -= k2 * d;
    u3[i] -= k3[i] * d;
  }
}

const Kernels kScalar{scale_row_s, radial_band_s, max_abs_s, max_norm3_s,
                      sum_abs2_s,  sum_abs3_s,    mul_s,     leray_row_s};

// ---------- AVX2 ----------

#ifdef NSWP_X86
#define NSWP_AVX2 __attribute__((target("avx2,fma")))

NSWP_AVX2 inline __m256d dup_pair(const double* p) {
  __m256d x = _mm256_castpd128_pd256(_mm_loadu_pd(p));
  return _mm256_permute4x64_pd(x, 0x50);  // p0 p0 p1 p1
}

NSWP_AVX2 inline __m256d ramp4(__m256d rho) {
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d x = _mm256_sub_pd(rho, one);
  x = _mm256_min_pd(_mm256_max_pd(x, _mm256_setzero_pd()), one);
  // 1 - x^3 (10 + x(-15 + 6x)); evaluated in the same order as the scalar ramp
  __m256d p = _mm256_add_pd(_mm256_set1_pd(-15.0), _mm256_mul_pd(_mm256_set1_pd(6.0), x));
  p = _mm256_add_pd(_mm256_set1_pd(10.0), _mm256_mul_pd(x, p));
  __m256d x3 = _mm256_mul_pd(_mm256_mul_pd(x, x), x);
  return _mm256_sub_pd(one, _mm256_mul_pd(x3, p));
}

NSWP_AVX2 void scale_row_a(cplx* c, const double* v, double s, std::size_t n) {
  double* d = reinterpret_cast<double*>(c);
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d m = _mm256_mul_pd(vs, dup_pair(v + i));
    _mm256_storeu_pd(d + 2 * i, _mm256_mul_pd(_mm256_loadu_pd(d + 2 * i), m));
  }
  for (; i < n; ++i) c[i] *= s * v[i];
}

NSWP_AVX2 void radial_band_a(cplx* out, const cplx* in, const double* r, std::size_t n,
                             double ao, double ai) {
  const double* src = reinterpret_cast<const double*>(in);
  double* dst = reinterpret_cast<double*>(out);
  const __m256d vo = _mm256_set1_pd(ao), vi = _mm256_set1_pd(ai);
  const bool band = ai > 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d rr = _mm256_loadu_pd(r + i);
    __m256d m = ramp4(_mm256_mul_pd(rr, vo));
    if (band) m = _mm256_sub_pd(m, ramp4(_mm256_mul_pd(rr, vi)));
    __m256d lo = _mm256_permute4x64_pd(m, 0x50);
    __m256d hi = _mm256_permute4x64_pd(m, 0xFA);
    _mm256_storeu_pd(dst + 2 * i, _mm256_mul_pd(_mm256_loadu_pd(src + 2 * i), lo));
    _mm256_storeu_pd(dst + 2 * i + 4, _mm256_mul_pd(_mm256_loadu_pd(src + 2 * i + 4), hi));
  }
  for (; i < n; ++i)
    out[i] = in[i] * (band ? ramp(r[i] * ao) - ramp(r[i] * ai) : ramp(r[i] * ao));
}

NSWP_AVX2 inline __m256d sq4(const double* p) {
  __m256d a = _mm256_loadu_pd(p), b = _mm256_loadu_pd(p + 4);
  return _mm256_hadd_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b));
}

NSWP_AVX2 inline double hmax(__m256d v) {
  alignas(32) double t[4];
  _mm256_store_pd(t, v);
  return std::max(std::max(t[0], t[1]), std::max(t[2], t[3]));
}

NSWP_AVX2 inline double hsum(__m256d v) {
  alignas(32) double t[4];
  _mm256_store_pd(t, v);
  return (t[0] + t[1]) + (t[2] + t[3]);
}

NSWP_AVX2 double max_abs_a(const cplx* a, std::size_t n) {
  const double* p = reinterpret_cast<const double*>(a);
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) m = _mm256_max_pd(m, sq4(p + 2 * i));
  double r = hmax(m);
  for (; i < n; ++i) r = std::max(r, std::norm(a[i]));
  return std::sqrt(r);
}

NSWP_AVX2 double max_norm3_a(const cplx* a, const cplx* b, const cplx* c, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  const double* pc = reinterpret_cast<const double*>(c);
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d s = _mm256_add_pd(_mm256_add_pd(sq4(pa + 2 * i), sq4(pb + 2 * i)), sq4(pc + 2 * i));
    m = _mm256_max_pd(m, s);
  }
  double r = hmax(m);
  for (; i < n; ++i) r = std::max(r, std::norm(a[i]) + std::norm(b[i]) + std::norm(c[i]));
  return std::sqrt(r);
}

NSWP_AVX2 double sum_abs2_a(const cplx* a, std::size_t n) {
  const double* p = reinterpret_cast<const double*>(a);
  __m256d s = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) s = _mm256_add_pd(s, sq4(p + 2 * i));
  double r = hsum(s);
  for (; i < n; ++i) r += std::norm(a[i]);
  return r;
}

NSWP_AVX2 double sum_abs3_a(const cplx* a, std::size_t n) {
  const double* p = reinterpret_cast<const double*>(a);
  __m256d s = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d q = sq4(p + 2 * i);
    s = _mm256_add_pd(s, _mm256_mul_pd(q, _mm256_sqrt_pd(q)));
  }
  double r = hsum(s);
  for (; i < n; ++i) {
    double q = std::norm(a[i]);
    r += q * std::sqrt(q);
  }
  return r;
}

NSWP_AVX2 void mul_a(cplx* out, const cplx* a, const cplx* b, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  double* po = reinterpret_cast<double*>(out);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d va = _mm256_loadu_pd(pa + 2 * i);
    __m256d vb = _mm256_loadu_pd(pb + 2 * i);
    __m256d br = _mm256_movedup_pd(vb);
    __m256d bi = _mm256_permute_pd(vb, 0xF);
    __m256d sw = _mm256_permute_pd(va, 0x5);
    _mm256_storeu_pd(po + 2 * i, _mm256_addsub_pd(_mm256_mul_pd(va, br), _mm256_mul_pd(sw, bi)));
  }
  for (; i < n; ++i) {
    double ar = a[i].real(), ai = a[i].imag(), br = b[i].real(), bi = b[i].imag();
    out[i] = cplx(ar * br - ai * bi, ai * br + ar * bi);
  }
}

NSWP_AVX2 void leray_row_a(cplx* u1, cplx* u2, cplx* u3, double k1, double k2,
                           const double* k3, std::size_t n) {
  double* p1 = reinterpret_cast<double*>(u1);
  double* p2 = reinterpret_cast<double*>(u2);
  double* p3 = reinterpret_cast<double*>(u3);
  const __m256d vk1 = _mm256_set1_pd(k1), vk2 = _mm256_set1_pd(k2);
  const __m256d k12 = _mm256_set1_pd(k1 * k1 + k2 * k2);
  const __m256d zero = _mm256_setzero_pd(), one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d vk3 = dup_pair(k3 + i);
    __m256d kk = _mm256_add_pd(k12, _mm256_mul_pd(vk3, vk3));
    __m256d nz = _mm256_cmp_pd(kk, zero, _CMP_NEQ_OQ);
    __m256d inv = _mm256_and_pd(nz, _mm256_div_pd(one, _mm256_blendv_pd(one, kk, nz)));
    __m256d a = _mm256_loadu_pd(p1 + 2 * i);
    __m256d b = _mm256_loadu_pd(p2 + 2 * i);
    __m256d c = _mm256_loadu_pd(p3 + 2 * i);
    __m256d d = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(vk1, a), _mm256_mul_pd(vk2, b)),
                              _mm256_mul_pd(vk3, c));
    d = _mm256_mul_pd(d, inv);
    _mm256_storeu_pd(p1 + 2 * i, _mm256_sub_pd(a, _mm256_mul_pd(vk1, d)));
    _mm256_storeu_pd(p2 + 2 * i, _mm256_sub_pd(b, _mm256_mul_pd(vk2, d)));
    _mm256_storeu_pd(p3 + 2 * i, _mm256_sub_pd(c, _mm256_mul_pd(vk3, d)));
  }
  if (i < n) leray_row_s(u1 + i, u2 + i, u3 + i, k1, k2, k3 + i, n - i);
}

const Kernels kAvx2{scale_row_a, radial_band_a, max_abs_a, max_norm3_a,
                    sum_abs2_a,  sum_abs3_a,    mul_a,     leray_row_a};
#endif

Isa detect() {
#ifdef NSWP_X86
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Isa::avx2;
#endif
  return Isa::scalar;
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> a{detect()};
  return a;
}

}  // namespace

Isa detected_isa() {
  static const Isa d = detect();
  return d;
}

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
  if (isa == Isa::avx2 && detected_isa() != Isa::avx2) isa = Isa::scalar;
  active().store(isa, std::memory_order_relaxed);
}

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

const Kernels& scalar_kernels() { return kScalar; }

const Kernels& avx2_kernels() {
#ifdef NSWP_X86
  return kAvx2;
#else
  return kScalar;
#endif
}

const Kernels& kernels() { return active_isa() == Isa::avx2 ? avx2_kernels() : kScalar; }

}  // namespace nswp::simd
