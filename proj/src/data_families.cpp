#include "nswp/data_families.hpp"

#include <cmath>
#include <sstream>

#include "nswp/operators.hpp"

namespace nswp {

double Profile::eval(double x, double y, double z, int a, int b) const {
  const double w2 = width * width;
  const double g = amplitude * std::exp(-(x * x + y * y + z * z) / w2);
  const double X[4] = {0.0, x, y, z};
  // d_a phi = -2 x_a / w^2 phi;  d_a d_b phi = (4 x_a x_b / w^4 - 2 delta_ab / w^2) phi
  if (a == 0 && b == 0) return g;
  if (a == 0 || b == 0) return -2.0 * X[a + b] / w2 * g;
  return (4.0 * X[a] * X[b] / (w2 * w2) - (a == b ? 2.0 / w2 : 0.0)) * g;
}

double Profile::spectral_radius(double rel) const {
  // phi_hat ~ exp(-w^2 |k|^2 / 4)
  return 2.0 / width * std::sqrt(std::log(1.0 / rel));
}

double log_factor(double eps) { return std::pow(-std::log(eps), 0.2); }

std::string resolvability_issue(const FamilyParams& p) {
  std::ostringstream os;
  if (!(p.epsilon > 0.0 && p.epsilon < 1.0)) {
    os << "epsilon must lie in (0,1), got " << p.epsilon;
    return os.str();
  }
  if (!(p.alpha > 0.0 && p.alpha < 1.0)) {
    os << "alpha must lie in (0,1), got " << p.alpha;
    return os.str();
  }
  const double r0 = p.profile.spectral_radius();
  const double kc = p.grid.cutoff();
  if (1.0 / p.epsilon + r0 > kc) {
    os << "oscillation 1/eps + profile radius = " << 1.0 / p.epsilon + r0 << " exceeds cutoff " << kc;
    return os.str();
  }
  if (r0 / std::pow(p.epsilon, p.alpha) > kc) {
    os << "compressed profile radius " << r0 / std::pow(p.epsilon, p.alpha) << " exceeds cutoff " << kc;
    return os.str();
  }
  // cos(x3/eps) must be periodic on the box.
  const double periods = p.grid.L / (2.0 * 3.14159265358979323846 * p.epsilon);
  if (std::abs(periods - std::round(periods)) > 1e-9) {
    os << "cos(x3/eps) is not periodic on a box of side " << p.grid.L;
    return os.str();
  }
  return {};
}

void check_resolvable(const FamilyParams& p) {
  std::string why = resolvability_issue(p);
  if (!why.empty()) throw ResolvabilityError(why);
}

std::vector<double> resolvable_epsilons(const std::vector<double>& eps, const FamilyParams& base,
                                        std::vector<double>* clipped) {
  std::vector<double> out;
  for (double e : eps) {
    FamilyParams q = base;
    q.epsilon = e;
    if (resolvable(q))
      out.push_back(e);
    else if (clipped)
      clipped->push_back(e);
  }
  return out;
}

double periodization_tail(const FamilyParams& p) {
  // The Gaussian is largest on a face at its centre; the compressed axis is smaller still.
  return std::abs(p.profile.eval(0.5 * p.grid.L, 0.0, 0.0));
}

namespace {

ScalarField sample_factor(const FamilyParams& p, int a, int b, bool complex_phase) {
  const GridSpec& g = p.grid;
  const double sa = std::pow(p.epsilon, -p.alpha);
  CVec s(g.size());
  for (int i = 0; i < g.n; ++i) {
    const double x = g.coord(i);
    for (int j = 0; j < g.n; ++j) {
      const double y = g.coord(j) * sa;
      for (int k = 0; k < g.n; ++k) {
        const double z = g.coord(k);
        const double v = p.profile.eval(x, y, z, a, b);
        s[g.index(i, j, k)] =
            complex_phase ? std::polar(v, z / p.epsilon) : cplx(v * std::cos(z / p.epsilon), 0.0);
      }
    }
  }
  ScalarField f = to_spectral(g, std::move(s), !complex_phase);
  dealias(f);
  return f;
}

}  // namespace

ScalarField make_f_eps(const FamilyParams& p, bool real) {
  check_resolvable(p);
  return sample_factor(p, 0, 0, !real);
}

ScalarField family_factor(const FamilyParams& p, int a, int b) {
  check_resolvable(p);
  return sample_factor(p, a, b, false);
}

VectorField make_family_data(const FamilyParams& p) {
  check_resolvable(p);
  ScalarField phi = sample_factor(p, 0, 0, false);
  phi *= log_factor(p.epsilon) * std::pow(p.epsilon, -(1.0 - p.alpha));
  VectorField u(p.grid, true);
  u.comp[0] = derivative(phi, 2);
  u.comp[1] = derivative(phi, 1);
  u.comp[1] *= -1.0;
  dealias(u);
  u.divergence_free = true;
  return u;
}

std::string rescaled_issue(const FamilyParams& shape, double scale, const GridSpec& grid, double spectral_tail,
                           double face_tolerance) {
  std::ostringstream os;
  if (!(shape.epsilon > 0.0 && shape.epsilon < 1.0) || !(shape.alpha > 0.0 && shape.alpha < 1.0) || !(scale > 0.0)) {
    os << "need 0 < eps, alpha < 1 and scale > 0";
    return os.str();
  }
  const double r0 = shape.profile.spectral_radius(spectral_tail);
  const double k = std::max(1.0 / shape.epsilon + r0, r0 / std::pow(shape.epsilon, shape.alpha)) / scale;
  if (k > 0.9 * grid.cutoff()) {
    os << "rescaled spectral radius " << k << " exceeds 0.9 cutoff " << 0.9 * grid.cutoff();
    return os.str();
  }
  const double face = std::abs(shape.profile.eval(0.5 * grid.L / scale, 0.0, 0.0)) / std::abs(shape.profile.eval(0, 0, 0));
  if (face > face_tolerance) {
    os << "rescaled profile is " << face << " of its peak on the box faces";
    return os.str();
  }
  return {};
}

VectorField make_rescaled_data(const FamilyParams& shape, double scale, const GridSpec& grid, double spectral_tail,
                               double face_tolerance) {
  const std::string why = rescaled_issue(shape, scale, grid, spectral_tail, face_tolerance);
  if (!why.empty()) throw ResolvabilityError(why);
  const double sa = std::pow(shape.epsilon, -shape.alpha);
  const double pre = log_factor(shape.epsilon) * std::pow(shape.epsilon, -(1.0 - shape.alpha));
  ScalarField psi = sample(grid, [&](double x, double y, double z) {
    x /= scale, y /= scale, z /= scale;
    return pre * std::cos(z / shape.epsilon) * shape.profile.eval(x, y * sa, z);
  });
  // psi(x) = phi_eps(x / s), so d psi = (d phi_eps)(x / s) / s as required
  VectorField u(grid, true);
  u.comp[0] = derivative(psi, 2);
  u.comp[1] = derivative(psi, 1);
  u.comp[1] *= -1.0;
  dealias(u);
  u.divergence_free = true;
  return u;
}

VectorField make_reynolds_data(double nu, double alpha, const Profile& profile, const GridSpec& grid) {
  FamilyParams p;
  p.epsilon = nu;
  p.alpha = alpha;
  p.profile = profile;
  p.grid = grid;
  VectorField v = make_family_data(p);
  v *= nu;
  return v;
}

}  // namespace nswp
