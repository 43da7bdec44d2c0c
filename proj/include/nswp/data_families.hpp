#pragma once
// Oscillating initial data built from a Gaussian profile phi(x) = A exp(-|x|^2 / w^2).
//
//   f_eps(x)   = e^{i x3/eps} phi(x1, x2/eps^alpha, x3)        (cosine when real)
//   phi_eps    = (-log eps)^{1/5} eps^{-(1-alpha)} cos(x3/eps) phi(x1, x2/eps^alpha, x3)
//   u_{0,eps}  = (d2 phi_eps, -d1 phi_eps, 0)
//   v_{0,nu}   = nu * u_{0,nu}

#include <stdexcept>
#include <string>
#include <vector>

#include "nswp/spectral_core.hpp"

namespace nswp {

struct ResolvabilityError : std::domain_error {
  using std::domain_error::domain_error;
};

struct Profile {
  double amplitude = 1.0;
  double width = 1.0;

  // Partial derivative d_a d_b phi at (x,y,z); a, b in {0,1,2,3}, 0 meaning none.
  double eval(double x, double y, double z, int a = 0, int b = 0) const;
  // |k| beyond which |phi_hat| < rel * phi_hat(0).
  double spectral_radius(double rel = 1e-6) const;
};

struct FamilyParams {
  double epsilon = 0.125;
  double alpha = 0.5;
  Profile profile;
  GridSpec grid;
};

// Empty string when resolvable, otherwise the reason.
std::string resolvability_issue(const FamilyParams& p);
inline bool resolvable(const FamilyParams& p) { return resolvability_issue(p).empty(); }
void check_resolvable(const FamilyParams& p);  // throws ResolvabilityError

// Keeps the resolvable epsilons (in input order); the rest go to `clipped`.
std::vector<double> resolvable_epsilons(const std::vector<double>& eps, const FamilyParams& base,
                                        std::vector<double>* clipped = nullptr);

// Largest |phi| on the box faces: the periodisation error scale.
double periodization_tail(const FamilyParams& p);

ScalarField make_f_eps(const FamilyParams& p, bool real = true);
VectorField make_family_data(const FamilyParams& p);
VectorField make_reynolds_data(double nu, double alpha, const Profile& profile, const GridSpec& grid);

// u_{0,eps}(x / s) / s on an arbitrary grid (shape.grid is ignored). Critical scaling, so
// every B^{-1} norm is unchanged; used to place the family inside Q for the fractal
// transform. No periodicity requirement on cos(x3/eps): the face value of the rescaled
// profile bounds the periodisation error instead.
VectorField make_rescaled_data(const FamilyParams& shape, double scale, const GridSpec& grid,
                               double spectral_tail = 1e-6, double face_tolerance = 1e-4);
// Empty when resolved (profile spectrum down to spectral_tail of its peak lies within 0.9 cutoff)
// and the face value is below face_tolerance (the family box L = 2 pi sits at 5e-5).
std::string rescaled_issue(const FamilyParams& shape, double scale, const GridSpec& grid, double spectral_tail = 1e-6,
                           double face_tolerance = 1e-4);

// cos(x3/eps) (d_a d_b phi)(x1, x2/eps^alpha, x3), sampled and dealiased.
ScalarField family_factor(const FamilyParams& p, int a, int b = 0);

// Prefactor (-log eps)^{1/5}.
double log_factor(double eps);

}  // namespace nswp
