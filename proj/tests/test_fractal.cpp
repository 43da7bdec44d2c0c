#include <algorithm>

#include "doctest.h"
#include "nswp/fractal_transform.hpp"
#include "nswp/operators.hpp"
#include "support.hpp"

using namespace nswp;
using namespace nswp::testing;

namespace {

VectorField gaussian_curl(const GridSpec& g, double w) {
  VectorField u(g, true);
  const double w2 = w * w;
  u[0] = sample(g, [&](double x, double y, double z) { return -2 * y / w2 * std::exp(-(x * x + y * y + z * z) / w2); });
  u[1] = sample(g, [&](double x, double y, double z) { return 2 * x / w2 * std::exp(-(x * x + y * y + z * z) / w2); });
  leray_project_inplace(u);  // sampling leaves an O(tail) divergence
  return u;
}

bool has_code(const std::vector<SpecViolation>& v, const std::string& code) {
  return std::any_of(v.begin(), v.end(), [&](const SpecViolation& s) { return s.code == code; });
}

TransformOptions relaxed(std::vector<std::string>* issues = nullptr) {
  TransformOptions o;
  o.strict = false;
  o.issues = issues;
  return o;
}

}  // namespace

TEST_CASE("validate_spec reports each violated condition") {
  TransformSpec ok{16, {{0.0, 0.0, 0.0}}, 0.25};
  CHECK(validate_spec(ok).empty());

  TransformSpec close{16, {{0.0, 0.0, 0.0}, {0.125, 0.0, 0.0}}, 0.25};
  CHECK(has_code(validate_spec(close), "pairwise_separation"));

  TransformSpec low{8, {{0.0, 0.0, 0.0}}, 0.25};  // Lambda = 2 / delta
  CHECK(has_code(validate_spec(low), "lambda_threshold"));

  TransformSpec odd{24, {{0.0, 0.0, 0.0}}, 0.25};
  CHECK(has_code(validate_spec(odd), "lambda_power_of_two"));

  TransformSpec edge{16, {{0.4, 0.0, 0.0}}, 0.25};
  const auto v = validate_spec(edge);
  CHECK(v.size() == 1);
  CHECK(has_code(v, "boundary_distance"));

  CHECK(has_code(validate_spec(TransformSpec{16, {}, 0.25}), "empty"));
}

TEST_CASE("lattice placements: snapped, separated, delta measured") {
  const double step = 1.0 / 64;
  for (int K : {1, 2, 4, 8, 5}) {
    const TransformSpec s = lattice_spec(K, 32, step);
    CHECK(s.K() == std::size_t(K));
    CHECK(s.delta == doctest::Approx(measured_delta(s.centers)));
    CHECK(s.delta > 0.1);
    for (const auto& x : s.centers)
      for (double c : x) CHECK(std::abs(c / step - std::round(c / step)) < 1e-12);
    if (4.0 / s.delta <= 32) CHECK(validate_spec(s).empty());
  }
  const TransformSpec s = lattice_spec(2, 16, step);
  CHECK(TransformSpec::from_json(s.to_json()).to_json() == s.to_json());
}

TEST_CASE("K = 1, x = 0, Lambda = 1 is the identity (relaxed mode records the violations)") {
  const GridSpec g = GridSpec::make(32, 2.0);
  const VectorField f = random_solenoidal_field(g, 8.0);
  std::vector<std::string> issues;
  const VectorField tf = apply_transform(f, TransformSpec{1, {{0.0, 0.0, 0.0}}, 0.25}, g, relaxed(&issues));
  CHECK(rel_diff(tf, f) == 0.0);
  CHECK(!issues.empty());
  CHECK(std::any_of(issues.begin(), issues.end(), [](const std::string& s) { return s.rfind("lambda_threshold", 0) == 0; }));
  CHECK_THROWS_AS(apply_transform(f, TransformSpec{1, {{0.0, 0.0, 0.0}}, 0.25}, g), TransformError);
}

TEST_CASE("strict mode: a resolved, supported datum passes and each copy sits in its ball") {
  // target Q = box of side 1; source side 8 with n = 128: width 0.23 is both resolved and supported
  const GridSpec target = GridSpec::make(128, 1.0);
  const GridSpec src = source_grid(target, 8);
  const VectorField f = gaussian_curl(src, 0.23);
  CHECK(mass_in_cube(f) >= 0.999);
  const TransformSpec spec{8, {{0.0, 0.0, 0.0}}, 0.5};
  REQUIRE(validate_spec(spec).empty());
  VectorField tf;
  CHECK_NOTHROW(tf = apply_transform(f, spec, target));
  CHECK(mass_in_ball(tf, spec.delta / 4) >= 0.999);
  CHECK(divergence_defect(tf) < 1e-10);

  // a wide datum violates the support criterion
  const VectorField wide = gaussian_curl(src, 0.6);
  CHECK_THROWS_AS(apply_transform(wide, spec, target), TransformError);
  // the wrong source grid is a grid error in either mode
  CHECK_THROWS_AS(apply_transform(gaussian_curl(target, 0.1), spec, target, relaxed()), GridError);
}

TEST_CASE("linearity and divergence preservation") {
  const GridSpec target = GridSpec::make(32, 1.0);
  const TransformSpec spec = lattice_spec(4, 16, target.dx());
  const GridSpec src = source_grid(target, 16);
  const VectorField f = random_solenoidal_field(src, 4.0), h = random_solenoidal_field(src, 4.0);
  const double a = uniform(-2, 2), b = uniform(-2, 2);
  VectorField lin = f;
  lin *= a;
  VectorField hb = h;
  hb *= b;
  lin += hb;
  VectorField rhs = apply_transform(f, spec, target, relaxed());
  rhs *= a;
  VectorField th = apply_transform(h, spec, target, relaxed());
  th *= b;
  rhs += th;
  CHECK(rel_diff(apply_transform(lin, spec, target, relaxed()), rhs) < 1e-12);
  CHECK(divergence_defect(apply_transform(f, spec, target, relaxed())) < 1e-10);
}

TEST_CASE("L^p identity |T f|_p = Lambda^{1-3/p} K^{1/p} |f|_p") {
  // copies of width 1/(2 Lambda) around centres ~0.39 apart barely touch
  const GridSpec target = GridSpec::make(64, 1.0);
  for (int K : {1, 2}) {
    const TransformSpec spec = lattice_spec(K, 8, target.dx());
    const GridSpec src = source_grid(target, 8);
    const VectorField f = gaussian_curl(src, 0.5);
    const VectorField tf = apply_transform(f, spec, target, relaxed());
    for (double p : {2.0, 3.0, kInf}) {
      const double expect = std::pow(8.0, 1.0 - 3.0 / p) * std::pow(double(K), p == kInf ? 0.0 : 1.0 / p);
      CHECK(lp_norm(tf, p) / lp_norm(f, p) == doctest::Approx(expect).epsilon(0.02));
    }
  }
}

TEST_CASE("H^-1: zero input guarded, K growth capped by 1.2 sqrt K") {
  const GridSpec target = GridSpec::make(64, 1.0);
  const GridSpec src = source_grid(target, 16);
  VectorField zero(src);
  zero.divergence_free = true;
  CHECK_THROWS_AS(hminus1_contraction(zero, lattice_spec(1, 16, target.dx()), target, relaxed()), std::invalid_argument);
  const VectorField f = gaussian_curl(src, 1.0);
  const double r1 = hminus1_contraction(f, lattice_spec(1, 16, target.dx()), target, relaxed());
  const double r4 = hminus1_contraction(f, lattice_spec(4, 16, target.dx()), target, relaxed());
  CHECK(r1 < 1.0);
  CHECK(r4 / r1 <= 1.2 * 2.0);
}

TEST_CASE("zero and identity gaps") {
  const GridSpec g = GridSpec::make(32, 2.0);
  VectorField zero(g);
  zero.divergence_free = true;
  const SandwichGap s = besov_sandwich_gap(zero, TransformSpec{1, {{0.0, 0.0, 0.0}}, 0.25}, 2.0, g, relaxed());
  CHECK(s.norm_f == 0.0);
  CHECK(s.norm_Tf == 0.0);
  CHECK(s.deviation == 0.0);

  const TransformSpec id{1, {{0.0, 0.0, 0.0}}, 0.25};
  CHECK(bilinear_stability_gap(zero, zero, id, g, 1, relaxed()).gap <= 0.0);
  const VectorField f = random_solenoidal_field(g, 6.0);
  CHECK(bilinear_stability_gap(f, f, id, g, 1, relaxed()).gap == 0.0);
  const SandwichGap si = besov_sandwich_gap(f, id, kInf, g, relaxed());
  CHECK(si.deviation == 0.0);
  CHECK(si.bminus3_f > 0.0);
}

TEST_CASE("cross interaction: empty sum and disjoint supports") {
  const GridSpec target = GridSpec::make(64, 1.0);
  const TimeGrid tg = TimeGrid::make(1e-6, 1e-2, 1);
  const GridSpec src = source_grid(target, 16);
  const VectorField f = gaussian_curl(src, 0.7);
  const TransformSpec spec = lattice_spec(2, 16, target.dx());
  const CrossReport one = cross_interaction_norm(
      [&](std::size_t) { return std::vector<VectorField>{apply_copy(f, 16, spec.centers[0], target)}; }, tg);
  CHECK(one.value == 0.0);
  std::vector<VectorField> copies;
  for (const auto& x : spec.centers) copies.push_back(apply_copy(f, 16, x, target));
  const CrossReport two = cross_interaction_norm(
      [&](std::size_t i) {
        std::vector<VectorField> u;
        for (const auto& c : copies) u.push_back(heat_flow(c, tg.t[i]));
        return u;
      },
      tg);
  // relative to a single copy's own nonlinearity the interaction is negligible at t ~ 0
  const double self = sobolev_norm(ns_nonlinearity(copies[0]), -0.5).value;
  CHECK(two.integrand.front() < 1e-6 * self);
}
