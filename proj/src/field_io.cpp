#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "json.hpp"
#include "nswp/spectral_core.hpp"

namespace nswp {

namespace {

constexpr char kMagic[8] = {'N', 'S', 'W', 'P', 'F', 'L', 'D', '1'};
constexpr std::uint32_t kFlagReal = 1u, kFlagDivFree = 2u;

template <class T>
void put_le(std::ostream& os, T v) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  os.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
  unsigned char b[sizeof(T)];
  is.read(reinterpret_cast<char*>(b), sizeof(T));
  if (!is) throw std::runtime_error("field file truncated");
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

void write_impl(const std::string& path, const ScalarField* comps, int ncomp, bool div_free) {
  const GridSpec& g = comps[0].grid;
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path);
  os.write(kMagic, 8);
  std::uint32_t flags = 0;
  bool real = true;
  for (int i = 0; i < ncomp; ++i) real = real && comps[i].real_valued;
  if (real) flags |= kFlagReal;
  if (div_free) flags |= kFlagDivFree;
  put_le<std::uint32_t>(os, std::uint32_t(g.n));
  put_le<std::uint32_t>(os, std::uint32_t(ncomp));
  put_le<double>(os, g.L);
  put_le<double>(os, g.dealias_fraction);
  put_le<std::uint32_t>(os, flags);
  put_le<std::uint32_t>(os, 0u);
  const int h = g.n / 2;
  for (int k = 0; k < ncomp; ++k)
    for (int m1 = -h; m1 < h; ++m1)
      for (int m2 = -h; m2 < h; ++m2)
        for (int m3 = -h; m3 < h; ++m3) {
          cplx z = comps[k].at(m1, m2, m3);
          put_le<float>(os, float(z.real()));
          put_le<float>(os, float(z.imag()));
        }
  if (!os) throw std::runtime_error("write failed: " + path);

  nlohmann::json meta = {{"format", "nswp-field"},
                         {"version", 1},
                         {"n", g.n},
                         {"L", g.L},
                         {"dealias_fraction", g.dealias_fraction},
                         {"components", ncomp},
                         {"real_valued", real},
                         {"divergence_free", div_free},
                         {"dtype", "complex64-le"},
                         {"order", "component, m1, m2, m3; each m from -n/2 to n/2-1; m3 fastest"},
                         {"header_bytes", 40}};
  std::ofstream js(path + ".json");
  js << meta.dump(2) << "\n";
}

struct Loaded {
  GridSpec grid;
  std::vector<ScalarField> comps;
  bool div_free = false;
};

Loaded read_impl(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kMagic, 8) != 0) throw std::runtime_error("not a field file: " + path);
  Loaded out;
  int n = int(get_le<std::uint32_t>(is));
  int ncomp = int(get_le<std::uint32_t>(is));
  double L = get_le<double>(is);
  double frac = get_le<double>(is);
  std::uint32_t flags = get_le<std::uint32_t>(is);
  (void)get_le<std::uint32_t>(is);
  out.grid = GridSpec::make(n, L, frac);
  out.div_free = (flags & kFlagDivFree) != 0;
  const int h = n / 2;
  for (int k = 0; k < ncomp; ++k) {
    ScalarField f(out.grid, (flags & kFlagReal) != 0);
    for (int m1 = -h; m1 < h; ++m1)
      for (int m2 = -h; m2 < h; ++m2)
        for (int m3 = -h; m3 < h; ++m3) {
          float re = get_le<float>(is);
          float im = get_le<float>(is);
          f.at(m1, m2, m3) = cplx(re, im);
        }
    out.comps.push_back(std::move(f));
  }
  return out;
}

}  // namespace

void write_field(const std::string& path, const ScalarField& f) { write_impl(path, &f, 1, false); }

void write_field(const std::string& path, const VectorField& v) {
  write_impl(path, v.comp.data(), 3, v.divergence_free);
}

VectorField read_vector_field(const std::string& path) {
  Loaded l = read_impl(path);
  if (l.comps.size() != 3) throw std::runtime_error("expected 3 components in " + path);
  VectorField v;
  for (int i = 0; i < 3; ++i) v.comp[i] = std::move(l.comps[i]);
  v.divergence_free = l.div_free;
  return v;
}

ScalarField read_scalar_field(const std::string& path) {
  Loaded l = read_impl(path);
  if (l.comps.size() != 1) throw std::runtime_error("expected 1 component in " + path);
  return std::move(l.comps[0]);
}

}  // namespace nswp
