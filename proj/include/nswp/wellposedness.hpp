#pragma once
// Smallness condition on the first iterate and the Picard loop for
//   R = Q(u_F, u_F) + 2 Q(u_F, R) + Q(R, R),   u_F = S(t) u0,
//   Q(a, b)(t) = -1/2 int_0^t S(t - s) P(a.grad b + b.grad a)(s) ds.
//
// The threshold is exp(-C0 b^4) / C0 with b = |u0|_{B^{-1}_{inf,2}}. C0 is not known;
// every report carries lhs / threshold so verdicts can be re-read under another C0.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "nswp/carleson.hpp"
#include "nswp/field_series.hpp"
#include "nswp/norms.hpp"
#include "nswp/time_grid.hpp"

namespace nswp {

double smallness_threshold(double b_norm, double C0);

struct SmallnessReport {
  double lhs = 0.0;
  double b_norm = 0.0;
  double C0 = 1.0;
  double threshold = 0.0;
  double ratio = 0.0;
  bool pass = false;
  bool loose = false;
  double eta = 0.0;
  bool below_normalization = false;  // b_norm < 1
  std::vector<std::string> notes;
  ENormReport e_norm;

  nlohmann::json to_json() const;
};

SmallnessReport smallness_check(const VectorField& u0, double C0, const TimeGrid& tg);
// Verdict uses lhs <= threshold(b + eta) - eta; eta in (0,1).
SmallnessReport smallness_check_loose(const VectorField& u0, double C0, double eta, const TimeGrid& tg);
// Same verdicts from an already computed lhs and b (no field work).
SmallnessReport smallness_from_values(double lhs, double b_norm, double C0, double eta, bool loose);

// I(t_i) = int_0^{t_i} S(t_i - s) F(s) ds per mode, with F linear between nodes and
// exact exponential weights. The head [0, t_0] uses F's initial value when present,
// otherwise F frozen at t_0.
FieldSeries duhamel_integral(const FieldSeries& F, const TimeGrid& tg);

FieldSeries duhamel_Q(const FieldSeries& a, const FieldSeries& b, const TimeGrid& tg);

// X_lambda norm of a series; cumU from integral_U(u0, tg).
KTReport x_lambda_norm(const FieldSeries& v, const TimeGrid& tg, double lambda,
                       const std::vector<double>& cumU);

struct PicardResult {
  int iterations = 0;
  double lambda = 0.0;
  FieldSeries R;
  double x_lambda_norm = 0.0;
  bool converged = false;
  bool diverged = false;
  std::vector<double> diff_history;   // |R_{m+1} - R_m|_lambda
  std::vector<double> ratio_history;  // successive difference ratios
  double residual = 0.0;              // |R - Phi(R)|_lambda
  // Probe estimates (lower bounds) of |L| = |2Q(u_F, .)| and |B| = |Q(., .)|, and the
  // ball radius (1 - |L|) / (2 |B|) they imply.
  double L_estimate = 0.0;
  double B_estimate = 0.0;
  double ball_radius = 0.0;

  nlohmann::json to_json() const;
};

PicardResult solve_mns(const VectorField& u0, double lambda, const TimeGrid& tg, int max_iter,
                       double tol);

struct LambdaChoice {
  double lambda = 1.0;
  bool found = false;
  std::vector<double> lambdas;
  std::vector<double> op_norms;  // max over probes of |2Q(u_F, v)|_lambda / |v|_lambda
  double fitted_exponent = 0.0;  // log-log slope of op_norms over the decaying range
  int probes = 0;

  nlohmann::json to_json() const;
};

// Probe set: v = S(t) w for random divergence-free band-limited w.
LambdaChoice choose_lambda(const VectorField& u0, const TimeGrid& tg, int probes = 50,
                           std::uint64_t seed = 1, double cap = 1048576.0);

// Random real divergence-free field with modes |k| <= kmax, unit L2 norm.
VectorField random_solenoidal(const GridSpec& g, double kmax, std::uint64_t seed);

}  // namespace nswp
