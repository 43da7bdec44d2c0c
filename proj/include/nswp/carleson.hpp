#pragma once
// Koch-Tataru type norms on a TimeGrid:
//   sup_t t^{1/2} |v(t)|_inf + sup_{x,R} R^{-3/2} (int_0^{R^2} int_{B(x,R)} |v|^2)^{1/2}
// R runs over dx * 2^r up to L/2; x over a lattice of stride R/2 (at least one cell).

#include <functional>
#include <vector>

#include "json.hpp"
#include "nswp/spectral_core.hpp"
#include "nswp/time_grid.hpp"

namespace nswp {

struct KTReport {
  double value = 0.0;
  double sup_part = 0.0;
  double carleson_part = 0.0;
  std::vector<double> radii;
  std::vector<double> carleson_per_radius;

  nlohmann::json to_json() const;
};

// Streaming: feed v(t_i) in increasing i, each multiplied by `factor`.
class KTAccumulator {
 public:
  KTAccumulator(const GridSpec& g, const TimeGrid& tg);
  void add(std::size_t i, const VectorField& v, double factor = 1.0);
  // Same with the three physical components already transformed.
  void add_physical(std::size_t i, const std::array<CVec, 3>& x, double factor = 1.0);
  KTReport finish() const;
  const std::vector<double>& radii() const { return radii_; }

 private:
  GridSpec g_;
  TimeGrid tg_;
  std::vector<double> radii_;
  std::vector<std::vector<double>> wR_;  // truncated dt-weights per radius
  std::vector<RVec> W_;                  // per radius: sum_i w_i |v_i(x)|^2
  double sup_ = 0.0;
};

// Ball sum on a lattice: max over lattice points x of dx^3 sum_{|y-x|<=R} W(y), via FFT.
double lattice_ball_max(const RVec& W, const GridSpec& g, double R, int stride);

using SeriesFn = std::function<VectorField(std::size_t i)>;

// v_lambda = v exp(-lambda cumU(t_i)); cumU empty means lambda is ignored.
KTReport koch_tataru_norm(const SeriesFn& v, const TimeGrid& tg, double lambda,
                          const std::vector<double>& cumU);
// One pass over the series for several lambda values.
std::vector<KTReport> koch_tataru_ladder(const SeriesFn& v, const TimeGrid& tg,
                                         const std::vector<double>& lambdas,
                                         const std::vector<double>& cumU);
// The X_0 norm of S(t) u0.
KTReport bmo_minus1_norm(const VectorField& u0, const TimeGrid& tg);

}  // namespace nswp
