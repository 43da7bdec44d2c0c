#pragma once
// Lebesgue, Sobolev, Besov (dyadic and heat characterisations) and E norms, and the
// weight U(t) = |u_F|_inf^2 + t |u_F|_inf^4 with u_F = S(t) u0.
//
// p or q = infinity is passed as kInf. Vector fields use the pointwise Euclidean norm.

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"
#include "nswp/littlewood_paley.hpp"
#include "nswp/spectral_core.hpp"
#include "nswp/time_grid.hpp"

namespace nswp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Grid L^p: (dx^3 sum |f|^p)^{1/p}, max for p = inf. `comps` physical samples, 1 or 3.
double lp_norm_samples(const CVec* const* comps, int ncomp, const GridSpec& g, double p);
double lp_norm(const ScalarField& f, double p);
double lp_norm(const VectorField& v, double p);

enum class BesovMethod { lp, heat };

struct BesovReport {
  double value = 0.0;
  BesovMethod method = BesovMethod::lp;
  double s = 0.0, p = 0.0, q = 0.0;
  // lp: one entry per band j with 2^{js} |Delta_j f|_p.
  std::vector<int> bands;
  std::vector<double> per_band;
  // heat: t_i and t_i^{-s/2} |S(t_i) f|_p.
  std::vector<double> times;
  std::vector<double> per_time;
  bool mean_dropped = false;

  nlohmann::json to_json() const;
};

BesovReport besov_lp(const DyadicFamily& fam, const ScalarField& f, double s, double p, double q);
BesovReport besov_lp(const DyadicFamily& fam, const VectorField& v, double s, double p, double q);
// s < 0 only. The mean is removed (the integral diverges otherwise) and flagged.
BesovReport besov_heat(const ScalarField& f, double s, double p, double q, const TimeGrid& tg);
BesovReport besov_heat(const VectorField& v, double s, double p, double q, const TimeGrid& tg);

struct SobolevResult {
  double value = 0.0;
  bool mean_dropped = false;  // s < 0 and the k = 0 coefficient was nonzero
};
SobolevResult sobolev_norm(const ScalarField& f, double s);
SobolevResult sobolev_norm(const VectorField& v, double s);

struct ENormReport {
  double value = 0.0;
  double term1 = 0.0;  // L1(dt; B^{-1}_{inf,1})
  double term2 = 0.0;  // sum_j 2^-j |Delta_j g|_{L2(t dt; L^inf)}
  std::vector<int> bands;
  std::vector<double> term1_band, term2_band;
  std::size_t nodes_used = 0;
  std::size_t nodes_total = 0;
  double tail_share = 0.0;

  nlohmann::json to_json() const;
};

// Streaming E-norm: feed g(t_i) in increasing i; fields are not retained.
class ENormAccumulator {
 public:
  ENormAccumulator(const DyadicFamily& fam, const TimeGrid& tg);
  void add(std::size_t i, const VectorField& g);
  void add(std::size_t i, const ScalarField& g);
  // True once the latest node is below rel * (largest band sup seen); heat-type
  // inputs never recover after that.
  bool decayed(double rel = 1e-13) const;
  ENormReport finish() const;

 private:
  void add_samples(std::size_t i, const ScalarField* comps, int ncomp);
  DyadicFamily fam_;
  TimeGrid tg_;
  std::vector<std::vector<double>> M_;  // M_[i][band]
  double peak_ = 0.0;
  double last_ = 0.0;
};

using TimeFieldFn = std::function<VectorField(std::size_t i, double t)>;
ENormReport e_norm(const DyadicFamily& fam, const TimeGrid& tg, const TimeFieldFn& g,
                   double stop_rel = 1e-13);

// U(t) for u_F = S(t) u0.
double weight_U(const VectorField& u0, double t);
struct UReport {
  std::vector<double> values;      // U(t_i)
  std::vector<double> cumulative;  // int_0^{t_i} U
  double integral = 0.0;           // int_0^{t_max} U
};
UReport integral_U(const VectorField& u0, const TimeGrid& tg);

}  // namespace nswp
