#include "nswp/stats.hpp"

#include <cmath>

namespace nswp {

nlohmann::json SlopeFit::to_json() const {
  if (!defined) return {{"defined", false}, {"points", points}};
  return {{"defined", true},    {"slope", slope},     {"intercept", intercept}, {"stderr", stderr_slope},
          {"ci95_low", ci_low}, {"ci95_high", ci_high}, {"points", points}};
}

namespace {

// Two-sided 97.5% Student t quantiles for 1..30 degrees of freedom.
double t975(int dof) {
  static const double tab[] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
                               2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
                               2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
  if (dof < 1) return 0.0;
  if (dof <= 30) return tab[dof - 1];
  return 1.96;
}

}  // namespace

SlopeFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  SlopeFit f;
  const std::size_t n = std::min(x.size(), y.size());
  f.points = int(n);
  if (n < 2) return f;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) mx += x[i], my += y[i];
  mx /= n, my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) sxx += (x[i] - mx) * (x[i] - mx), sxy += (x[i] - mx) * (y[i] - my);
  if (sxx <= 0.0) return f;
  f.defined = true;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (n > 2) {
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - (f.intercept + f.slope * x[i]);
      sse += r * r;
    }
    f.stderr_slope = std::sqrt(sse / double(n - 2) / sxx);
  }
  const double half = t975(int(n) - 2) * f.stderr_slope;
  f.ci_low = f.slope - half;
  f.ci_high = f.slope + half;
  return f;
}

SlopeFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i)
    if (x[i] > 0.0 && y[i] > 0.0) lx.push_back(std::log(x[i])), ly.push_back(std::log(y[i]));
  return linear_fit(lx, ly);
}

}  // namespace nswp
