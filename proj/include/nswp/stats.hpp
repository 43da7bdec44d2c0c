#pragma once
// Least-squares fits for log-log slope reports.

#include <vector>

#include "json.hpp"

namespace nswp {

struct SlopeFit {
  bool defined = false;  // needs >= 2 distinct positive points
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  double ci_low = 0.0, ci_high = 0.0;  // 95% band (Student t); equals slope for 2 points
  int points = 0;

  nlohmann::json to_json() const;
};

SlopeFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);
// Fit of log y against log x; non-positive entries are skipped.
SlopeFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace nswp
