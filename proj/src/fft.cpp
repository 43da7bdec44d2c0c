#include "nswp/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

#include "nswp/spectral_core.hpp"

namespace nswp {

void* fft_alloc(std::size_t bytes) { return fftw_malloc(bytes ? bytes : 1); }
void fft_free(void* p) noexcept { fftw_free(p); }

namespace fft {
namespace {

std::mutex plan_mutex;

// Planning is not thread-safe in FFTW; execution on new arrays is.
fftw_plan plan_for(int n, int sign) {
  static std::map<std::pair<int, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto key = std::make_pair(n, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::size_t N = std::size_t(n) * n * n;
  fftw_complex* tmp = fftw_alloc_complex(N);
  fftw_plan p = fftw_plan_dft_3d(n, n, n, tmp, tmp, sign, FFTW_ESTIMATE);
  fftw_free(tmp);
  cache.emplace(key, p);
  return p;
}

}  // namespace

void forward(std::complex<double>* x, int n) {
  auto* p = reinterpret_cast<fftw_complex*>(x);
  fftw_execute_dft(plan_for(n, FFTW_FORWARD), p, p);
}

void backward(std::complex<double>* x, int n) {
  auto* p = reinterpret_cast<fftw_complex*>(x);
  fftw_execute_dft(plan_for(n, FFTW_BACKWARD), p, p);
}

const char* library_version() { return fftw_version; }

}  // namespace fft
}  // namespace nswp
