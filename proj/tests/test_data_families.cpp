#include "doctest.h"
#include "nswp/data_families.hpp"
#include "nswp/norms.hpp"
#include "nswp/operators.hpp"
#include "support.hpp"

using namespace nswp;
using namespace nswp::testing;

namespace {

FamilyParams params(double eps, int n = 64, double L = 2 * M_PI) {
  FamilyParams p;
  p.epsilon = eps;
  p.grid = GridSpec::make(n, L);
  return p;
}

}  // namespace

TEST_CASE("resolvability and clipping") {
  CHECK(resolvable(params(0.5)));
  CHECK(resolvable(params(0.125)));
  CHECK_FALSE(resolvable(params(1.0 / 32)));  // 32 + r0 > 64/3
  CHECK_FALSE(resolvable(params(1.0)));
  CHECK_FALSE(resolvable(params(0.0)));
  FamilyParams bad_alpha = params(0.125);
  bad_alpha.alpha = 1.0;
  CHECK_FALSE(resolvable(bad_alpha));
  // cos(x3/eps) must close up on the box
  CHECK_FALSE(resolvable(params(0.3)));
  CHECK_THROWS_AS(make_family_data(params(1.0 / 32)), ResolvabilityError);

  std::vector<double> clipped;
  const auto kept = resolvable_epsilons({0.25, 0.125, 0.0625, 0.03125, 0.015625}, params(0.5), &clipped);
  CHECK(kept == std::vector<double>{0.25, 0.125});
  CHECK(clipped == std::vector<double>{0.0625, 0.03125, 0.015625});
}

TEST_CASE("u_{0,eps} is divergence-free with no third component") {
  for (double eps : {0.5, 0.25, 0.125}) {
    const VectorField u = make_family_data(params(eps));
    CHECK(u.divergence_free);
    CHECK(max_coeff(u[2]) == 0.0);
    CHECK(divergence_defect(u) < 1e-12);
    CHECK(hermitian_defect(u[0]) < 1e-14);
  }
}

TEST_CASE("components factor into prefactor times a sampled profile derivative") {
  // L = 4 pi keeps the unperiodised d1 phi tail below 1e-16
  const FamilyParams p = params(0.25, 128, 4 * M_PI);
  const VectorField u = make_family_data(p);
  const double pre = log_factor(p.epsilon) * std::pow(p.epsilon, -(1.0 - p.alpha));
  // d2 of phi(x1, x2/eps^a, x3) brings down eps^-a
  ScalarField u1 = family_factor(p, 2);
  u1 *= pre * std::pow(p.epsilon, -p.alpha);
  ScalarField u2 = family_factor(p, 1);
  u2 *= -pre;
  CHECK(rel_diff(u[0], u1) < 1e-8);
  CHECK(rel_diff(u[1], u2) < 1e-8);
  CHECK(log_factor(std::exp(-32.0)) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("L^p norm of f_eps scales as eps^{alpha/p}") {
  // Gaussian profile: |phi|_2 = (pi/2)^{3/4} w^{3/2} A, |phi|_3 = (pi/3)^{1/2} w A, |phi|_inf = A
  for (double eps : {0.25, 0.125}) {
    const FamilyParams p = params(eps, 64);
    const ScalarField f = make_f_eps(p, false);  // complex phase: |f_eps| has no cosine
    const double w = p.profile.width, A = p.profile.amplitude;
    CHECK(lp_norm(f, 2.0) == doctest::Approx(std::pow(eps, p.alpha / 2) * std::pow(M_PI / 2, 0.75) * std::pow(w, 1.5) * A).epsilon(0.01));
    CHECK(lp_norm(f, 3.0) == doctest::Approx(std::pow(eps, p.alpha / 3) * std::sqrt(M_PI / 3) * w * A).epsilon(0.01));
    CHECK(lp_norm(f, kInf) == doctest::Approx(A).epsilon(0.01));
  }
}

TEST_CASE("Reynolds data: nu * u_{0,nu}, nu = 1 rejected") {
  const GridSpec g = GridSpec::make(64, 2 * M_PI);
  Profile prof;
  const VectorField v = make_reynolds_data(0.25, 0.5, prof, g);
  VectorField u = make_family_data(params(0.25));
  u *= 0.25;
  CHECK(rel_diff(v, u) < 1e-15);
  CHECK(max_coeff(v[2]) == 0.0);
  CHECK_THROWS_AS(make_reynolds_data(1.0, 0.5, prof, g), ResolvabilityError);
}

TEST_CASE("profile derivatives match finite differences") {
  Profile prof{1.3, 0.7};
  const double h = 1e-4, x = 0.3, y = -0.2, z = 0.45;
  auto at = [&](double dx, double dy, double dz) { return prof.eval(x + dx, y + dy, z + dz); };
  CHECK(prof.eval(x, y, z, 1) == doctest::Approx((at(h, 0, 0) - at(-h, 0, 0)) / (2 * h)).epsilon(1e-6));
  CHECK(prof.eval(x, y, z, 0, 3) == doctest::Approx((at(0, 0, h) - at(0, 0, -h)) / (2 * h)).epsilon(1e-6));
  CHECK(prof.eval(x, y, z, 2, 2) == doctest::Approx((at(0, h, 0) - 2 * at(0, 0, 0) + at(0, -h, 0)) / (h * h)).epsilon(1e-5));
  CHECK(prof.eval(x, y, z, 1, 2) ==
        doctest::Approx((at(h, h, 0) - at(h, -h, 0) - at(-h, h, 0) + at(-h, -h, 0)) / (4 * h * h)).epsilon(1e-5));
  // phi_hat falls to 1e-6 of its peak at the reported radius
  const double r = prof.spectral_radius(1e-6);
  CHECK(std::exp(-prof.width * prof.width * r * r / 4) == doctest::Approx(1e-6).epsilon(1e-9));
}

TEST_CASE("periodization tail is the face value of the profile") {
  const FamilyParams p = params(0.125);
  CHECK(periodization_tail(p) == doctest::Approx(std::exp(-M_PI * M_PI)).epsilon(1e-12));
}

TEST_CASE("rescaled data on an s-times larger box carries the family coefficients times 1/s") {
  const FamilyParams p = params(0.25);
  const VectorField u = make_family_data(p);
  for (double s : {2.0, 4.0}) {
    const GridSpec big = GridSpec::make(64, s * p.grid.L);
    REQUIRE(rescaled_issue(p, s, big).empty());
    const VectorField r = make_rescaled_data(p, s, big);
    CHECK(r.divergence_free);
    CHECK(max_coeff(r[2]) == 0.0);
    for (int i = 0; i < 2; ++i) {
      ScalarField expect(big, true);
      expect.c = u[i].c;
      expect *= 1.0 / s;
      CHECK(rel_diff(r[i], expect) < 1e-12);
    }
  }
  // too coarse for the oscillation, then too small a box for the profile
  CHECK_FALSE(rescaled_issue(p, 0.25, p.grid).empty());
  CHECK_THROWS_AS(make_rescaled_data(p, 0.25, p.grid), ResolvabilityError);
  CHECK(rescaled_issue(p, 2.0, GridSpec::make(64, 2.0)).find("faces") != std::string::npos);
  // a looser spectral tail admits a smaller scale
  const GridSpec q = GridSpec::make(64, 32.0);
  CHECK_FALSE(rescaled_issue(params(0.5), 1.7, q).empty());
  CHECK(rescaled_issue(params(0.5), 1.7, q, 1e-2).empty());
}
