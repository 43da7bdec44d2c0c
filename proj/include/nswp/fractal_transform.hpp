#pragma once
// T f = sum_J Lambda f(Lambda (x - x_J)) for centers x_J in the unit cube Q = (-1/2, 1/2)^3.
//
// Compatible grids: f lives on (n, Lambda * L_t) and T f on (n, L_t). Mode m has
// wavenumber k on the source and Lambda k on the target, so
//   (T f)^(m) = Lambda * sum_J exp(-i k'_m . x_J) * f^(m),   k'_m = 2 pi m / L_t,
// which is exact with no interpolation. Time grids rescale by Lambda^-2.

#include <array>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "nswp/norms.hpp"
#include "nswp/spectral_core.hpp"
#include "nswp/time_grid.hpp"

namespace nswp {

using Point3 = std::array<double, 3>;

struct TransformSpec {
  int Lambda = 1;
  std::vector<Point3> centers;
  double delta = 0.25;

  std::size_t K() const { return centers.size(); }
  nlohmann::json to_json() const;
  static TransformSpec from_json(const nlohmann::json& j);
};

struct SpecViolation {
  std::string code;  // lambda_power_of_two | lambda_threshold | pairwise_separation | boundary_distance | empty
  std::string message;
};

std::vector<SpecViolation> validate_spec(const TransformSpec& spec);

// Smallest pairwise / boundary distance of a center set.
double measured_delta(const std::vector<Point3>& centers);

// Reproducible placements maximising delta for K centers, snapped to multiples of `step`
// (use the target grid spacing so translations are exact lattice shifts). delta is set
// to the measured separation.
TransformSpec lattice_spec(int K, int Lambda, double step);

struct TransformError : std::domain_error {
  using std::domain_error::domain_error;
};

struct TransformOptions {
  // strict: spec violations and support failures throw. Otherwise they are only
  // recorded in `issues` (used for the desk-scale sweeps, see README).
  bool strict = true;
  double support_mass = 0.999;
  std::vector<std::string>* issues = nullptr;
};

GridSpec source_grid(const GridSpec& target, int Lambda);

// Fraction of the physical L2 mass with max |x_i| < half (f on its own grid, centred at 0).
double mass_in_cube(const ScalarField& f, double half = 0.5);
double mass_in_cube(const VectorField& v, double half = 0.5);
double mass_in_ball(const VectorField& v, double radius);

ScalarField apply_transform(const ScalarField& f, const TransformSpec& spec, const GridSpec& target,
                            const TransformOptions& opt = {});
VectorField apply_transform(const VectorField& f, const TransformSpec& spec, const GridSpec& target,
                            const TransformOptions& opt = {});
// Single copy J (no validation).
VectorField apply_copy(const VectorField& f, int Lambda, const Point3& center, const GridSpec& target);

struct SandwichGap {
  double norm_f = 0.0;      // |f|_{B^{-1}_{inf,r}} on the source grid
  double norm_Tf = 0.0;     // |T f|_{B^{-1}_{inf,r}} on the target grid
  double deviation = 0.0;   // norm_Tf - norm_f
  double lower_gap = 0.0;   // norm_Tf - norm_f  (>= -C Lambda^-2 B3 expected)
  double upper_gap = 0.0;   // norm_f - norm_Tf  (>= -C Lambda^-2 B3 expected)
  double bminus3_f = 0.0;   // |f|_{B^{-3}_{inf,inf}}
  nlohmann::json to_json() const;
};
SandwichGap besov_sandwich_gap(const VectorField& f, const TransformSpec& spec, double r,
                               const GridSpec& target, const TransformOptions& opt = {});

// |T f|_{H^-1} / |f|_{H^-1}; throws std::invalid_argument on zero input.
double hminus1_contraction(const VectorField& f, const TransformSpec& spec, const GridSpec& target,
                           const TransformOptions& opt = {});

struct BilinearGap {
  ENormReport transformed;  // |P(S T f . grad S T g)|_E on the target grid
  ENormReport original;     // |P(S f . grad S g)|_E on the source grid
  double gap = 0.0;         // transformed - original
  nlohmann::json to_json() const;
};
// Symmetrised product P(a.grad b + b.grad a)/2 (equal to P(a.grad a) when f = g).
BilinearGap bilinear_stability_gap(const VectorField& f, const VectorField& g, const TransformSpec& spec,
                                   const GridSpec& target, int nodes_per_octave = 2,
                                   const TransformOptions& opt = {});

// F = -P sum_{J != J'} u_J . grad u_J', evaluated as -(N(sum u_J) - sum N(u_J)).
// flows(i) returns the K per-center fields at t_i. Returns (int |F|^2_{H^-1/2} dt)^{1/2}.
using CenterFlowsFn = std::function<std::vector<VectorField>(std::size_t i)>;
struct CrossReport {
  double value = 0.0;
  std::vector<double> integrand;  // |F(t_i)|_{H^-1/2}
};
CrossReport cross_interaction_norm(const CenterFlowsFn& flows, const TimeGrid& tg);

}  // namespace nswp
