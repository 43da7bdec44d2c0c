#pragma once
// Heat semigroup, Leray projector and the Navier-Stokes nonlinearity as Fourier multipliers.

#include <stdexcept>

#include "nswp/spectral_core.hpp"

namespace nswp {

struct DivergenceError : std::domain_error {
  using std::domain_error::domain_error;
};

ScalarField heat_flow(const ScalarField& f, double t);
VectorField heat_flow(const VectorField& v, double t);
void heat_flow_inplace(VectorField& v, double t);

VectorField leray_project(const VectorField& v);
void leray_project_inplace(VectorField& v);

ScalarField divergence(const ScalarField& v1, const ScalarField& v2, const ScalarField& v3);
ScalarField divergence(const VectorField& v);
VectorField gradient(const ScalarField& f);
VectorField curl(const VectorField& a);

// Relative divergence tolerance accepted by the nonlinearity.
double nonlinearity_div_tolerance(const GridSpec& g);

// P(u.grad u) in divergence form sum_l d_l(u^l u), 2/3-dealiased.
VectorField ns_nonlinearity(const VectorField& u);
// Symmetric bilinear form P(a.grad b + b.grad a), divergence form, dealiased.
// Both inputs must be divergence-free.
VectorField ns_bilinear(const VectorField& a, const VectorField& b);
// u.grad u in convective form without projection, dealiased. Used as an oracle and
// for the factorised product checks.
VectorField convective_product(const VectorField& u);

// P(S(t)u0 . grad S(t)u0)
VectorField first_iterate(const VectorField& u0, double t);

}  // namespace nswp
