#pragma once
// Periodic-box stand-in for R^3: grids, Fourier-coefficient fields, transforms,
// spectral derivatives and 2/3-rule products.
//
// Coefficients are c_m with f(x) = sum_m c_m exp(i k.x), k = (2pi/L) m, stored in
// FFT order (index i holds m = i for i < n/2, i - n otherwise). Physical samples
// use the same order: index i sits at x = dx * m(i), so the origin is index 0.

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <new>
#include <stdexcept>
#include <string>
#include <vector>

namespace nswp {

using cplx = std::complex<double>;

void* fft_alloc(std::size_t bytes);
void fft_free(void* p) noexcept;

template <class T>
struct FftAllocator {
  using value_type = T;
  FftAllocator() = default;
  template <class U>
  FftAllocator(const FftAllocator<U>&) noexcept {}
  T* allocate(std::size_t n) {
    void* p = fft_alloc(n * sizeof(T));
    if (!p) throw std::bad_alloc();
    return static_cast<T*>(p);
  }
  void deallocate(T* p, std::size_t) noexcept { fft_free(p); }
  template <class U>
  bool operator==(const FftAllocator<U>&) const noexcept { return true; }
};

using CVec = std::vector<cplx, FftAllocator<cplx>>;
using RVec = std::vector<double>;

struct GridError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct GridSpec {
  int n = 32;
  double L = 6.283185307179586;
  double dealias_fraction = 2.0 / 3.0;

  static GridSpec make(int n, double L, double dealias_fraction = 2.0 / 3.0);
  void validate() const;

  std::size_t size() const { return std::size_t(n) * n * n; }
  double dx() const { return L / n; }
  double k0() const { return 2.0 * 3.14159265358979323846 / L; }
  // Retained modes satisfy |k| < cutoff().
  double cutoff() const { return dealias_fraction * (n / 2) * k0(); }
  int mode(int i) const { return i < n / 2 ? i : i - n; }
  double wavenumber(int i) const { return k0() * mode(i); }
  double coord(int i) const { return dx() * mode(i); }
  std::size_t index(int i0, int i1, int i2) const {
    return (std::size_t(i0) * n + i1) * n + i2;
  }
  // Index of mode m (any integer in [-n/2, n/2)).
  int slot(int m) const { return m < 0 ? m + n : m; }
  bool same_as(const GridSpec& o) const;
};

// Per-axis wavenumbers and the |k| table, cached per grid.
struct Wavenumbers {
  RVec k;       // length n
  RVec kabs;    // length n^3
  RVec retain;  // length n^3: 1 if |k| < cutoff
};
std::shared_ptr<const Wavenumbers> wavenumbers(const GridSpec& g);

struct ScalarField {
  GridSpec grid;
  CVec c;
  bool real_valued = true;

  ScalarField() = default;
  explicit ScalarField(const GridSpec& g, bool real = true);

  cplx& at(int m1, int m2, int m3);
  const cplx& at(int m1, int m2, int m3) const;

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double s);
  ScalarField& operator*=(cplx s);
  void axpy(double a, const ScalarField& x);
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

struct VectorField {
  std::array<ScalarField, 3> comp;
  bool divergence_free = false;

  VectorField() = default;
  explicit VectorField(const GridSpec& g, bool real = true);
  const GridSpec& grid() const { return comp[0].grid; }
  ScalarField& operator[](int i) { return comp[i]; }
  const ScalarField& operator[](int i) const { return comp[i]; }

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(double s);
  void axpy(double a, const VectorField& x);
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double s, VectorField a);

// Physical samples (FFT order, see header note).
CVec to_physical(const ScalarField& f);
ScalarField to_spectral(const GridSpec& g, const CVec& samples, bool real_valued);
ScalarField to_spectral(const GridSpec& g, CVec&& samples, bool real_valued);

using PointFn = std::function<double(double, double, double)>;
ScalarField sample(const GridSpec& g, const PointFn& f);

// axis in {1,2,3}
ScalarField derivative(const ScalarField& f, int axis);
void dealias(ScalarField& f);
void dealias(VectorField& v);
ScalarField dealiased_product(const ScalarField& f, const ScalarField& g);

// Samples on an m^3 subcube centred at the origin with spacing equal to the grid's dx.
struct Subcube {
  int m = 0;
  std::vector<double> samples;  // row-major, axis 1 slowest; point (a,b,c) at dx*(a - m/2, ...)
};
ScalarField embed_compact(const Subcube& sub, const GridSpec& g);

// Norms and checks.
double l2_norm(const ScalarField& f);               // sqrt(L^3 sum |c|^2)
double l2_norm(const VectorField& v);
double l2_norm_physical(const CVec& samples, const GridSpec& g);  // sqrt(dx^3 sum |f|^2)
double inner_l2(const VectorField& a, const VectorField& b);      // Re <a,b>
double hermitian_defect(const ScalarField& f);      // max |c(-m) - conj c(m)| / max |c|
double max_coeff(const ScalarField& f);
double max_coeff(const VectorField& v);
double divergence_defect(const VectorField& v);     // max |k.u(k)| / max |u(k)|
double max_abs_physical(const VectorField& v);      // sup_x |v(x)| (Euclidean)
double max_abs_physical(const ScalarField& f);
double beyond_cutoff_fraction(const ScalarField& f);  // share of l2 mass with |k| >= cutoff

// Field storage: see docs/FIELD_FORMAT.md
void write_field(const std::string& path, const ScalarField& f);
void write_field(const std::string& path, const VectorField& v);
VectorField read_vector_field(const std::string& path);
ScalarField read_scalar_field(const std::string& path);

}  // namespace nswp
