#include "doctest.h"
#include "nswp/littlewood_paley.hpp"
#include "nswp/norms.hpp"
#include "support.hpp"

using namespace nswp;
using namespace nswp::testing;

namespace {

ScalarField single_mode(const GridSpec& g, int m1, int m2, int m3) {
  ScalarField f(g, false);
  f.at(m1, m2, m3) = 1.0;
  return f;
}

}  // namespace

TEST_CASE("band range from cutoff arithmetic") {
  const DyadicFamily fam = build_family(GridSpec::make(64, 2 * M_PI));
  // k0 = 1, cutoff = 64/3: j_min = -1, j_max = 4
  CHECK(fam.j_min == -1);
  CHECK(fam.j_max == 4);
  CHECK(fam.band_count() >= 4);
  // k0 just above a power of two on n = 16 leaves room for 3 bands only
  CHECK_THROWS_AS(build_family(GridSpec::make(16, 2 * M_PI / 1.01)), GridError);
  CHECK(build_family(GridSpec::make(32, 2 * M_PI / 1.01)).band_count() >= 4);
}

TEST_CASE("multiplier support and values") {
  for (int j = -2; j <= 6; ++j) {
    const double s = std::ldexp(1.0, j);
    CHECK(DyadicFamily::psi(j, 1.5 * s) > 0.0);
    CHECK(DyadicFamily::psi(j, 1.5 * s) < 1.0);
    for (double r : {0.0, 0.1 * s, 0.5 * s}) {
      CHECK(DyadicFamily::psi(j, r) == 0.0);
      CHECK(DyadicFamily::phi_hat(j, r) == 1.0);
    }
    CHECK(DyadicFamily::phi_hat(j, 2.0 * s + 1e-9) == 0.0);
    // dyadic dilation structure
    for (double x : {0.7, 1.1, 1.9, 2.6, 3.3})
      CHECK(DyadicFamily::psi(j, x * s) == doctest::Approx(DyadicFamily::psi(0, x)).epsilon(1e-14));
  }
  // phi_hat = 1 on |xi| <= 1, 0 on |xi| > 2
  for (double r = 0.0; r <= 1.0; r += 0.01) CHECK(std::abs(DyadicFamily::phi_hat(0, r) - 1.0) < 1e-12);
  for (double r = 2.0001; r <= 4.0; r += 0.01) CHECK(std::abs(DyadicFamily::phi_hat(0, r)) < 1e-12);
}

TEST_CASE("partition of unity on the resolved annulus") {
  const DyadicFamily fam = build_family(GridSpec::make(64, 2 * M_PI));
  const auto& kabs = fam.waves->kabs;
  double worst = 0.0;
  for (double r : kabs) {
    if (r < std::ldexp(1.0, fam.j_min + 1) || r > std::ldexp(1.0, fam.j_max)) continue;
    double s = 0.0;
    for (int j : fam.bands()) s += DyadicFamily::psi(j, r);
    worst = std::max(worst, std::abs(s - 1.0));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("blocks: almost orthogonality, telescope, DC") {
  const GridSpec g = GridSpec::make(32, 2 * M_PI);
  const DyadicFamily fam = build_family(g);
  const ScalarField f = random_scalar(g, g.cutoff());
  for (int j : fam.bands())
    for (int k : fam.bands())
      if (std::abs(j - k) >= 2) CHECK(max_coeff(block(fam, block(fam, f, j), k)) < 1e-15 * max_coeff(f));

  ScalarField sum = lowpass(fam, f, fam.j_min);
  for (int j : fam.bands()) sum += block(fam, f, j);
  // telescopes to S_{j_max+1} f, which passes every retained mode
  CHECK(rel_diff(sum, f) < 1e-10);
  CHECK(rel_diff(lowpass(fam, f, fam.j_max + 1), f) < 1e-14);

  ScalarField c(g);
  c.at(0, 0, 0) = 3.0;
  for (int j : fam.bands()) CHECK(max_coeff(block(fam, c, j)) == 0.0);

  CHECK_THROWS_AS(block(fam, f, fam.j_max + 1), std::out_of_range);
  CHECK_THROWS_AS(block(fam, f, fam.j_min - 1), std::out_of_range);
  CHECK_THROWS_AS(lowpass(fam, f, fam.j_max + 2), std::out_of_range);
}

TEST_CASE("lowpass: S_{j+1} - S_j = Delta_j, monotone L2, support") {
  const GridSpec g = GridSpec::make(32, 2 * M_PI);
  const DyadicFamily fam = build_family(g);
  const ScalarField f = random_scalar(g, g.cutoff());
  double prev = 0.0;
  for (int j = fam.j_min; j <= fam.j_max; ++j) {
    ScalarField d = lowpass(fam, f, j + 1);
    d -= lowpass(fam, f, j);
    CHECK(rel_diff(d, block(fam, f, j)) < 1e-14);
    const double n = l2_norm(lowpass(fam, f, j));
    CHECK(n >= prev);
    prev = n;
  }
  // j = j_max passes everything band-limited to |k| <= 2^{j_max}
  const ScalarField low = random_scalar(g, std::ldexp(1.0, fam.j_max));
  CHECK(rel_diff(lowpass(fam, low, fam.j_max), low) < 1e-14);
  // a mode with |k| > 2^{j+1} is removed
  const ScalarField m = single_mode(g, 5, 0, 0);
  CHECK(max_coeff(lowpass(fam, m, 1)) == 0.0);
}

TEST_CASE("single mode at 1.2 * 2^j is captured by bands j-1..j+1") {
  const GridSpec g = GridSpec::make(64, 2 * M_PI / 5.0);  // k0 = 5: |k| = 5 m
  const DyadicFamily fam = build_family(g);
  // m = (0,0,2): |k| = 10 = 1.25 * 8; m = (0,2,3): |k| = 5 sqrt13 ~ 1.13 * 16
  for (auto [m2, m3, j] : {std::tuple{0, 2, 3}, std::tuple{2, 3, 4}}) {
    const ScalarField f = single_mode(g, 0, m2, m3);
    ScalarField s(g, false);
    for (int i = j - 1; i <= j + 1; ++i)
      if (fam.has_band(i)) s += block(fam, f, i);
    CHECK(std::abs(s.at(0, m2, m3) - 1.0) < 1e-12);
  }
}

TEST_CASE("scaling commutation: Delta_j of a dilation is the dilated Delta_{j - log2 Lambda}") {
  for (int Lambda : {2, 4}) {
    const GridSpec src = GridSpec::make(32, 2 * M_PI * Lambda), dst = GridSpec::make(32, 2 * M_PI);
    const DyadicFamily fs = build_family(src), fd = build_family(dst);
    const ScalarField f = random_scalar(src, 0.8 * src.cutoff());
    // f(Lambda x) on the target box has the same coefficient array
    ScalarField dil(dst);
    dil.c = f.c;
    const int shift = Lambda == 2 ? 1 : 2;
    for (int j : fd.bands()) {
      if (!fs.has_band(j - shift)) continue;
      ScalarField lhs = block(fd, dil, j);
      ScalarField rhs(dst);
      rhs.c = block(fs, f, j - shift).c;
      CHECK(rel_diff(lhs, rhs) < 1e-8);
    }
  }
}

TEST_CASE("Bernstein: sup of a block is bounded by the annulus mode count") {
  const GridSpec g = GridSpec::make(64, 2 * M_PI);
  const DyadicFamily fam = build_family(g);
  auto modes_in_band = [&](int j) {
    std::size_t N = 0;
    for (double r : fam.waves->kabs)
      if (DyadicFamily::psi(j, r) != 0.0 && r < g.cutoff()) ++N;
    return double(N);
  };
  // |g|_inf <= sum |c| <= sqrt(N_j) |c|_2 for any field
  for (int trial = 0; trial < 3; ++trial) {
    const ScalarField f = random_scalar(g, g.cutoff());
    for (int j : fam.bands()) {
      const ScalarField b = block(fam, f, j);
      const double l2 = lp_norm(b, 2.0);
      CHECK(lp_norm(b, kInf) <= std::sqrt(modes_in_band(j)) * l2 / std::pow(g.L, 1.5) * (1 + 1e-12));
    }
  }
  // Coherent phases (a lattice delta) saturate it: C in |D_j f|_inf <= C 2^{3j/p} |D_j f|_p
  // stays put across the bands that are fully resolved.
  ScalarField delta(g);
  for (std::size_t i = 0; i < delta.c.size(); ++i) delta.c[i] = fam.waves->retain[i];
  for (double p : {1.0, 2.0}) {
    std::vector<double> C;
    for (int j = fam.j_min + 2; j + 2 <= int(std::log2(g.cutoff())); ++j) {
      const ScalarField b = block(fam, delta, j);
      C.push_back(lp_norm(b, kInf) / (std::pow(2.0, 3.0 * j / p) * lp_norm(b, p)));
    }
    REQUIRE(C.size() >= 2);
    CHECK(*std::max_element(C.begin(), C.end()) / *std::min_element(C.begin(), C.end()) < 1.5);
  }
}
