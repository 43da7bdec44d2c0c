#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "nswp/fft.hpp"
#include "support.hpp"

using namespace nswp;
using namespace nswp::testing;

TEST_CASE("grid validation") {
  CHECK_NOTHROW(GridSpec::make(16, 1.0));
  CHECK_THROWS_AS(GridSpec::make(8, 1.0), GridError);
  CHECK_THROWS_AS(GridSpec::make(48, 1.0), GridError);
  CHECK_THROWS_AS(GridSpec::make(32, 0.0), GridError);
  CHECK_THROWS_AS(GridSpec::make(32, -2.0), GridError);
  const GridSpec g = GridSpec::make(32, 2 * M_PI);
  CHECK(g.wavenumber(1) == doctest::Approx(1.0));
  CHECK(g.mode(16) == -16);
  CHECK(g.mode(31) == -1);
}

TEST_CASE("DC coefficient gives a constant field") {
  const GridSpec g = GridSpec::make(16, 3.0);
  ScalarField f(g);
  f.at(0, 0, 0) = 2.5;
  const CVec s = to_physical(f);
  for (const auto& z : s) CHECK(std::abs(z - cplx(2.5, 0.0)) < 1e-14);
}

TEST_CASE("single mode m=(1,0,0) samples exp(i x1)") {
  const GridSpec g = GridSpec::make(16, 2 * M_PI);
  ScalarField f(g, false);
  f.at(1, 0, 0) = 1.0;
  const CVec s = to_physical(f);
  for (int a = 0; a < g.n; ++a)
    for (int b = 0; b < g.n; b += 5)
      CHECK(std::abs(s[g.index(a, b, 3)] - std::polar(1.0, g.coord(a))) < 1e-14);
}

TEST_CASE("random Hermitian coefficients: real samples match the direct DFT") {
  const GridSpec g = GridSpec::make(16, 2 * M_PI);
  const ScalarField f = random_scalar(g, 8.0);
  CHECK(hermitian_defect(f) < 1e-15);
  const CVec s = to_physical(f);
  double imag = 0.0, scale = 0.0, err = 0.0;
  for (const auto& z : s) imag = std::max(imag, std::abs(z.imag())), scale = std::max(scale, std::abs(z));
  CHECK(imag < 1e-12 * scale);
  for (int a = 0; a < g.n; a += 3)
    for (int b = 0; b < g.n; b += 5)
      for (int c = 0; c < g.n; c += 2) err = std::max(err, std::abs(s[g.index(a, b, c)] - direct_sample(f, a, b, c)));
  CHECK(err < 1e-12 * scale);
}

TEST_CASE("round trip and Parseval over 100 random fields") {
  const GridSpec g = GridSpec::make(16, 1.7);
  double worst_rt = 0.0, worst_pv = 0.0;
  for (int it = 0; it < 100; ++it) {
    const ScalarField f = random_scalar(g, uniform(3.0, 20.0));
    const CVec s = to_physical(f);
    worst_rt = std::max(worst_rt, rel_diff(to_spectral(g, s, true), f));
    const double phys = l2_norm_physical(s, g), spec = l2_norm(f);
    worst_pv = std::max(worst_pv, std::abs(phys - spec) / spec);
  }
  CHECK(worst_rt < 1e-12);
  CHECK(worst_pv < 1e-10);
}

TEST_CASE("derivative eigenfunction and constant") {
  const GridSpec g = GridSpec::make(16, 2 * M_PI);
  ScalarField e(g, false);
  e.at(1, 0, 0) = 1.0;
  const ScalarField d = derivative(e, 1);
  CHECK(std::abs(d.at(1, 0, 0) - cplx(0.0, 1.0)) < 1e-15);
  CHECK(max_coeff(derivative(e, 2)) == 0.0);
  ScalarField c(g);
  c.at(0, 0, 0) = 7.0;
  for (int ax = 1; ax <= 3; ++ax) CHECK(max_coeff(derivative(c, ax)) == 0.0);
}

namespace {

// Max error of the spectral x2-derivative of exp(-2|x|^2) against 4th-order central differences.
double fd_gap(int n) {
  const GridSpec g = GridSpec::make(n, 2 * M_PI);
  auto gauss = [](double x, double y, double z) { return std::exp(-2.0 * (x * x + y * y + z * z)); };
  const CVec d = to_physical(derivative(sample(g, gauss), 2));
  const double h = g.dx();
  double err = 0.0;
  for (int a = 0; a < n; a += 2)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; c += 2) {
        const double x = g.coord(a), y = g.coord(b), z = g.coord(c);
        const double fd = (-gauss(x, y + 2 * h, z) + 8 * gauss(x, y + h, z) - 8 * gauss(x, y - h, z) +
                           gauss(x, y - 2 * h, z)) /
                          (12 * h);
        err = std::max(err, std::abs(d[g.index(a, b, c)].real() - fd));
      }
  return err;
}

}  // namespace

TEST_CASE("spectral derivative agrees with 4th-order finite differences at O(h^4)") {
  const double e1 = fd_gap(32), e2 = fd_gap(64);
  CHECK(e1 < 2e-2);
  CHECK(e1 / e2 > 12.0);
  CHECK(e1 / e2 < 20.0);
}

TEST_CASE("mixed derivatives commute") {
  const GridSpec g = GridSpec::make(16, 2.0);
  for (int it = 0; it < 5; ++it) {
    const ScalarField f = random_scalar(g, 30.0);
    for (int a = 1; a <= 3; ++a)
      for (int b = a + 1; b <= 3; ++b)
        CHECK(rel_diff(derivative(derivative(f, a), b), derivative(derivative(f, b), a)) < 1e-12);
  }
}

TEST_CASE("dealiased product basics") {
  const GridSpec g = GridSpec::make(16, 2 * M_PI);
  const ScalarField f = random_scalar(g, 4.0);
  ScalarField one(g);
  one.at(0, 0, 0) = 1.0;
  CHECK(rel_diff(dealiased_product(f, one), f) < 1e-13);

  ScalarField a(g, false), b(g, false);
  a.at(1, 0, 0) = 1.0;
  b.at(0, 1, 0) = 1.0;
  const ScalarField ab = dealiased_product(a, b);
  CHECK(std::abs(ab.at(1, 1, 0) - 1.0) < 1e-14);
  CHECK(l2_norm(ab) == doctest::Approx(std::pow(2 * M_PI, 1.5)).epsilon(1e-12));

  const ScalarField h = random_scalar(g, 6.0);
  CHECK(rel_diff(dealiased_product(f, h), dealiased_product(h, f)) < 1e-14);
}

TEST_CASE("dealiased product matches the 2x oversampled product on retained modes") {
  const GridSpec g = GridSpec::make(16, 2 * M_PI);
  const GridSpec G = GridSpec::make(32, 2 * M_PI);
  const ScalarField f = random_scalar(g, g.cutoff()), h = random_scalar(g, g.cutoff());
  auto up = [&](const ScalarField& s) {
    ScalarField o(G);
    for (int a = -8; a < 8; ++a)
      for (int b = -8; b < 8; ++b)
        for (int c = -8; c < 8; ++c) o.at(a, b, c) = s.at(a, b, c);
    return o;
  };
  const CVec F = to_physical(up(f)), H = to_physical(up(h));
  CVec P(F.size());
  for (std::size_t i = 0; i < P.size(); ++i) P[i] = F[i] * H[i];
  const ScalarField fine = to_spectral(G, P, true);
  const ScalarField prod = dealiased_product(f, h);
  double err = 0.0, scale = max_coeff(prod);
  for (int a = -8; a < 8; ++a)
    for (int b = -8; b < 8; ++b)
      for (int c = -8; c < 8; ++c) {
        const double k = g.k0() * std::sqrt(double(a * a + b * b + c * c));
        if (k < g.cutoff())
          err = std::max(err, std::abs(prod.at(a, b, c) - fine.at(a, b, c)));
        else
          CHECK(prod.at(a, b, c) == cplx(0.0, 0.0));
      }
  CHECK(err < 1e-12 * scale);
}

TEST_CASE("embed_compact") {
  const GridSpec g = GridSpec::make(64, 8.0);  // dx = 1/8
  Subcube zero{8, std::vector<double>(512, 0.0)};
  CHECK(max_coeff(embed_compact(zero, g)) == 0.0);

  // smooth bump supported in [-1/2, 1/2]^3, sampled on the 8^3 subcube around the origin
  Subcube sub{8, {}};
  double l2 = 0.0;
  auto bump1 = [](double x) { return std::abs(x) < 0.5 ? std::exp(1.0 - 1.0 / (1.0 - 4.0 * x * x)) : 0.0; };
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b)
      for (int c = 0; c < 8; ++c) {
        const double v = bump1(g.dx() * (a - 4)) * bump1(g.dx() * (b - 4)) * bump1(g.dx() * (c - 4));
        sub.samples.push_back(v);
        l2 += v * v;
      }
  l2 = std::sqrt(l2 * std::pow(g.dx(), 3));
  const ScalarField f = embed_compact(sub, g);
  const CVec s = to_physical(f);
  double inside = 0.0, total = 0.0;
  for (int a = 0; a < g.n; ++a)
    for (int b = 0; b < g.n; ++b)
      for (int c = 0; c < g.n; ++c) {
        const double v = std::norm(s[g.index(a, b, c)]);
        total += v;
        if (std::abs(g.coord(a)) <= 1 && std::abs(g.coord(b)) <= 1 && std::abs(g.coord(c)) <= 1) inside += v;
      }
  CHECK(inside / total >= 0.99);
  CHECK(std::abs(l2_norm(f) - l2) <= 0.01 * l2);

  Subcube big{32, std::vector<double>(32 * 32 * 32, 1.0)};
  CHECK_THROWS_AS(embed_compact(big, g), GridError);
}

TEST_CASE("field file round trip") {
  const GridSpec g = GridSpec::make(16, 2.5);
  VectorField v = random_solenoidal_field(g, 10.0);
  const auto path = (std::filesystem::temp_directory_path() / "nswp_rt.fld").string();
  write_field(path, v);
  CHECK(std::filesystem::file_size(path) == 40 + 3 * 16 * 16 * 16 * 8);
  CHECK(std::filesystem::exists(path + ".json"));
  const VectorField w = read_vector_field(path);
  CHECK(w.grid().same_as(g));
  CHECK(w.divergence_free);
  CHECK(rel_diff(w, v) < 1e-7);  // complex64 payload
  std::ofstream(path, std::ios::binary) << "garbage";
  CHECK_THROWS(read_vector_field(path));
  std::filesystem::remove(path);
  std::filesystem::remove(path + ".json");
}

TEST_CASE("fft backend reports a version") { CHECK(std::string(fft::library_version()).size() > 0); }
