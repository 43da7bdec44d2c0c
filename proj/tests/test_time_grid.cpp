#include <cmath>

#include "doctest.h"
#include "nswp/littlewood_paley.hpp"
#include "nswp/time_grid.hpp"

using namespace nswp;

namespace {

double integrate(const std::vector<double>& w, const TimeGrid& tg, double (*g)(double, double), double a) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * g(tg.t[i], a);
  return s;
}

double expo(double t, double a) { return std::exp(-a * t); }

}  // namespace

TEST_CASE("grid bounds follow the spatial grid") {
  for (int n : {32, 64, 128})
    for (double L : {1.0, 2 * M_PI, 10.0})
      for (int k : {1, 2, 4}) {
        const GridSpec g = GridSpec::make(n, L);
        const DyadicFamily fam = build_family(g);
        const TimeGrid tg = TimeGrid::for_grid(g, k);
        CHECK(tg.t_min() <= std::ldexp(1.0, -2 * fam.j_max));
        CHECK(tg.t_max() >= L * L);
        CHECK(tg.rho > 1.0);
        CHECK(tg.rho <= 2.0);
        for (std::size_t i = 1; i < tg.size(); ++i) CHECK(tg.t[i] / tg.t[i - 1] == doctest::Approx(tg.rho).epsilon(1e-14));
      }
  CHECK_THROWS_AS(TimeGrid::make(0.0, 1.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid::make(1.0, 0.5, 2), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid::make(0.1, 1.0, 0), std::invalid_argument);
}

TEST_CASE("band exponentials integrate to 1/(2 4^j) within 2%") {
  const GridSpec g = GridSpec::make(64, 2 * M_PI);
  const DyadicFamily fam = build_family(g);
  for (int k : {1, 2}) {
    const TimeGrid tg = TimeGrid::for_grid(g, k);
    const auto w = tg.weights_dt();
    for (int j : fam.bands()) {
      const double a = 2.0 * std::ldexp(1.0, 2 * j);
      CHECK(integrate(w, tg, expo, a) == doctest::Approx(1.0 / a).epsilon(0.02));
    }
  }
}

TEST_CASE("t dt and dt/t weights") {
  const TimeGrid tg = TimeGrid::make(std::ldexp(1.0, -16), 256.0, 2);
  for (double a : {0.5, 3.0, 40.0}) {
    // int t e^{-at} dt = 1/a^2
    CHECK(integrate(tg.weights_tdt(), tg, expo, a) == doctest::Approx(1.0 / (a * a)).epsilon(0.01));
  }
  // int t^{1/2} e^{-t} dt/t = Gamma(1/2)
  const auto w = tg.weights_dt_over_t(0.5);
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * std::sqrt(tg.t[i]) * std::exp(-tg.t[i]);
  CHECK(s == doctest::Approx(std::sqrt(M_PI)).epsilon(0.01));
  CHECK_THROWS_AS(tg.weights_dt_over_t(0.0), std::invalid_argument);
}

TEST_CASE("partial and cumulative integrals") {
  const TimeGrid tg = TimeGrid::make(std::ldexp(1.0, -14), 64.0, 4);
  for (double T : {1e-6, 0.01, 0.3, 1.0, 2.7, 50.0}) {
    const auto w = tg.weights_dt_upto(T);
    CHECK(integrate(w, tg, expo, 1.0) == doctest::Approx(1.0 - std::exp(-T)).epsilon(2e-3));
  }
  std::vector<double> g;
  for (double t : tg.t) g.push_back(std::exp(-t));
  const auto c = tg.cumulative(g);
  for (std::size_t i = 0; i < tg.size(); i += 7) CHECK(c[i] == doctest::Approx(1.0 - std::exp(-tg.t[i])).epsilon(2e-3));
  CHECK_THROWS_AS(tg.cumulative(std::vector<double>(3)), std::invalid_argument);
  // a tail share near one flags a truncated integrand
  std::vector<double> flat(tg.size(), 1.0);
  CHECK(tg.tail_share(flat, tg.weights_dt()) > 0.8);
  CHECK(tg.tail_share(g, tg.weights_dt()) < 0.01);  // e^{-6.4}
}

TEST_CASE("grids on Lambda-dilated boxes are exact rescalings") {
  for (int Lambda : {2, 4, 8}) {
    const GridSpec src = GridSpec::make(64, 2 * M_PI * Lambda), dst = GridSpec::make(64, 2 * M_PI);
    const TimeGrid a = TimeGrid::for_grid(src, 2).scaled(1.0 / (Lambda * Lambda));
    CHECK(a.same_as(TimeGrid::for_grid(dst, 2)));
  }
}
