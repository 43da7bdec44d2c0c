#include "nswp/wellposedness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "nswp/littlewood_paley.hpp"
#include "nswp/operators.hpp"
#include "nswp/stats.hpp"

namespace nswp {

double smallness_threshold(double b_norm, double C0) {
  if (!(C0 > 0.0)) throw std::invalid_argument("C0 must be positive");
  return std::exp(-C0 * std::pow(b_norm, 4.0)) / C0;
}

nlohmann::json SmallnessReport::to_json() const {
  nlohmann::json j = {{"lhs", lhs},
                      {"b_norm", b_norm},
                      {"C0", C0},
                      {"threshold", threshold},
                      {"ratio", std::isfinite(ratio) ? nlohmann::json(ratio) : nlohmann::json("inf")},
                      {"verdict", pass ? "pass" : "fail"},
                      {"variant", loose ? "loose" : "strict"},
                      {"below_normalization", below_normalization},
                      {"notes", notes},
                      {"e_norm", e_norm.to_json()},
                      {"conditional_on_C0", true}};
  if (loose) j["eta"] = eta;
  // log10(lhs / exp(-C0 b^4)/C0) stays finite when the threshold underflows.
  if (lhs > 0.0)
    j["log10_ratio"] = (std::log(lhs) + C0 * std::pow(loose ? b_norm + eta : b_norm, 4.0) + std::log(C0)) / std::log(10.0);
  return j;
}

SmallnessReport smallness_from_values(double lhs, double b_norm, double C0, double eta, bool loose) {
  SmallnessReport r;
  r.lhs = lhs;
  r.b_norm = b_norm;
  r.C0 = C0;
  r.loose = loose;
  if (loose) {
    if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("eta must lie in (0,1)");
    r.eta = eta;
    r.threshold = smallness_threshold(b_norm + eta, C0) - eta;
  } else {
    r.threshold = smallness_threshold(b_norm, C0);
  }
  if (r.threshold > 0.0)
    r.ratio = lhs / r.threshold;
  else
    r.ratio = lhs > 0.0 || r.threshold < 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  r.pass = lhs <= r.threshold;
  r.below_normalization = b_norm < 1.0;
  if (r.below_normalization)
    r.notes.push_back("b_norm < 1: the threshold formula is stated for data normalised to b_norm >= 1");
  r.notes.push_back("verdict is conditional on the configured C0");
  return r;
}

namespace {

SmallnessReport smallness_impl(const VectorField& u0, double C0, double eta, bool loose, const TimeGrid& tg) {
  const DyadicFamily fam = build_family(u0.grid());
  const double b = besov_lp(fam, u0, -1.0, kInf, 2.0).value;
  ENormReport e = e_norm(fam, tg, [&](std::size_t, double t) { return first_iterate(u0, t); });
  SmallnessReport r = smallness_from_values(e.value, b, C0, eta, loose);
  r.e_norm = e;
  return r;
}

}  // namespace

SmallnessReport smallness_check(const VectorField& u0, double C0, const TimeGrid& tg) {
  return smallness_impl(u0, C0, 0.0, false, tg);
}

SmallnessReport smallness_check_loose(const VectorField& u0, double C0, double eta, const TimeGrid& tg) {
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("eta must lie in (0,1)");
  return smallness_impl(u0, C0, eta, true, tg);
}

// ---------------- Duhamel ----------------

namespace {

// Weights for int_0^h e^{-kappa (h - s)} F(s) ds with F linear from F0 (s=0) to F1 (s=h).
struct CellWeights {
  double decay, w0, w1;
};

CellWeights cell_weights(double kappa, double h) {
  const double z = kappa * h;
  CellWeights c;
  c.decay = std::exp(-z);
  double a, phi1;  // a = (1 - e^{-z}(1+z)) / z^2, phi1 = (1 - e^{-z}) / z
  if (z < 1e-2) {
    a = 0.5 - z / 3.0 + z * z / 8.0 - z * z * z / 30.0;
    phi1 = 1.0 - z / 2.0 + z * z / 6.0 - z * z * z / 24.0;
  } else {
    a = (-std::expm1(-z) - z * c.decay) / (z * z);
    phi1 = -std::expm1(-z) / z;
  }
  c.w0 = h * a;
  c.w1 = h * phi1 - c.w0;
  return c;
}

bool all_zero(const CVec& v) {
  for (const auto& x : v)
    if (x != cplx(0.0, 0.0)) return false;
  return true;
}

}  // namespace

FieldSeries duhamel_integral(const FieldSeries& F, const TimeGrid& tg) {
  if (F.size() != tg.size()) throw std::invalid_argument("duhamel: series / time grid mismatch");
  const GridSpec& g = F.grid();
  const auto w = wavenumbers(g);
  const auto& idx = F.indices();
  const std::size_t m = idx.size();
  std::vector<double> kappa(m);
  for (std::size_t q = 0; q < m; ++q) kappa[q] = w->kabs[idx[q]] * w->kabs[idx[q]];

  FieldSeries I(g, tg.size());
  const auto init = F.initial();
  CVec F_init;
  if (init) {
    FieldSeries tmp(g, 1);
    tmp.set(0, *init);
    F_init = tmp.packed(0);
  }
  for (std::size_t i = 0; i < tg.size(); ++i) {
    const double h = i == 0 ? tg.t[0] : tg.t[i] - tg.t[i - 1];
    const CVec& Fi = F.packed(i);
    CVec& Ii = I.packed(i);
    for (std::size_t q = 0; q < m; ++q) {
      const CellWeights c = cell_weights(kappa[q], h);
      for (int comp = 0; comp < 3; ++comp) {
        const std::size_t p = comp * m + q;
        if (i == 0) {
          const cplx f0 = init ? F_init[p] : Fi[p];
          Ii[p] = c.w0 * f0 + c.w1 * Fi[p];
        } else {
          Ii[p] = c.decay * I.packed(i - 1)[p] + c.w0 * F.packed(i - 1)[p] + c.w1 * Fi[p];
        }
      }
    }
  }
  I.set_initial(VectorField(g, true));
  return I;
}

FieldSeries duhamel_Q(const FieldSeries& a, const FieldSeries& b, const TimeGrid& tg) {
  if (a.size() != tg.size() || b.size() != tg.size() || !a.grid().same_as(b.grid()))
    throw std::invalid_argument("duhamel_Q: series mismatch");
  FieldSeries B(a.grid(), tg.size());
  for (std::size_t i = 0; i < tg.size(); ++i) {
    if (all_zero(a.packed(i)) || all_zero(b.packed(i))) continue;
    B.set(i, ns_bilinear(a.get(i), b.get(i)));
  }
  const auto a0 = a.initial();
  const auto b0 = b.initial();
  if (a0 && b0) B.set_initial(ns_bilinear(*a0, *b0));
  FieldSeries Q = duhamel_integral(B, tg);
  Q *= -0.5;
  return Q;
}

KTReport x_lambda_norm(const FieldSeries& v, const TimeGrid& tg, double lambda,
                       const std::vector<double>& cumU) {
  return koch_tataru_norm([&](std::size_t i) { return v.get(i); }, tg, lambda, cumU);
}

// ---------------- Picard ----------------

nlohmann::json PicardResult::to_json() const {
  return {{"iterations", iterations},
          {"lambda", lambda},
          {"x_lambda_norm", x_lambda_norm},
          {"converged", converged},
          {"diverged", diverged},
          {"diff_history", diff_history},
          {"ratio_history", ratio_history},
          {"residual", residual},
          {"L_estimate", L_estimate},
          {"B_estimate", B_estimate},
          {"ball_radius", ball_radius},
          {"estimates_are_lower_bounds", true}};
}

PicardResult solve_mns(const VectorField& u0, double lambda, const TimeGrid& tg, int max_iter, double tol) {
  if (max_iter < 1) throw std::invalid_argument("solve_mns: max_iter >= 1");
  const GridSpec& g = u0.grid();
  const FieldSeries uF = heat_series(u0, tg);
  const std::vector<double> cum = integral_U(u0, tg).cumulative;
  auto norm = [&](const FieldSeries& s) { return x_lambda_norm(s, tg, lambda, cum).value; };

  const FieldSeries Q0 = duhamel_Q(uF, uF, tg);
  PicardResult r;
  r.lambda = lambda;
  FieldSeries R(g, tg.size());
  R.set_initial(VectorField(g, true));
  const double first_scale = std::max(norm(Q0), 1e-300);
  for (int m = 1; m <= max_iter; ++m) {
    FieldSeries next = Q0;
    FieldSeries lin = duhamel_Q(uF, R, tg);
    lin *= 2.0;
    next += lin;
    next += duhamel_Q(R, R, tg);
    const double d = norm(next - R);
    r.diff_history.push_back(d);
    if (r.diff_history.size() >= 2) {
      const double prev = r.diff_history[r.diff_history.size() - 2];
      r.ratio_history.push_back(prev > 0.0 ? d / prev : 0.0);
    }
    R = std::move(next);
    r.iterations = m;
    if (d < tol) {
      r.converged = true;
      break;
    }
    if (!std::isfinite(d) || d > 1e6 * first_scale) {
      r.diverged = true;
      break;
    }
  }
  if (!r.converged) r.diverged = true;
  r.x_lambda_norm = norm(R);
  // One more application gives the residual and the probe estimates of |L| and |B|.
  FieldSeries lin = duhamel_Q(uF, R, tg);
  lin *= 2.0;
  FieldSeries quad = duhamel_Q(R, R, tg);
  FieldSeries phi = Q0 + lin + quad;
  r.residual = norm(phi - R);
  if (r.x_lambda_norm > 0.0) {
    r.L_estimate = norm(lin) / r.x_lambda_norm;
    r.B_estimate = norm(quad) / (r.x_lambda_norm * r.x_lambda_norm);
    if (r.B_estimate > 0.0) r.ball_radius = (1.0 - r.L_estimate) / (2.0 * r.B_estimate);
  }
  r.R = std::move(R);
  return r;
}

// ---------------- lambda choice ----------------

nlohmann::json LambdaChoice::to_json() const {
  return {{"lambda", lambda},     {"found", found},
          {"lambdas", lambdas},   {"op_norms", op_norms},
          {"fitted_exponent", fitted_exponent}, {"probes", probes},
          {"estimate", "max over probes (lower bound on the operator norm)"}};
}

VectorField random_solenoidal(const GridSpec& g, double kmax, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  const auto w = wavenumbers(g);
  VectorField v(g, true);
  for (int c = 0; c < 3; ++c) {
    CVec s(g.size());
    for (std::size_t i = 0; i < s.size(); ++i)
      if (w->kabs[i] <= kmax && w->retain[i] != 0.0) s[i] = cplx(nd(rng), nd(rng));
    // Real part in physical space restores Hermitian symmetry.
    ScalarField f(g, false);
    f.c = std::move(s);
    CVec x = to_physical(f);
    for (auto& z : x) z = cplx(z.real(), 0.0);
    v.comp[c] = to_spectral(g, std::move(x), true);
    v.comp[c].c[0] = 0.0;
  }
  leray_project_inplace(v);
  dealias(v);
  const double n = l2_norm(v);
  if (n > 0.0) v *= 1.0 / n;
  v.divergence_free = true;
  return v;
}

LambdaChoice choose_lambda(const VectorField& u0, const TimeGrid& tg, int probes, std::uint64_t seed, double cap) {
  if (probes < 1) throw std::invalid_argument("choose_lambda: probes >= 1");
  LambdaChoice out;
  out.probes = probes;
  for (double l = 1.0; l <= cap; l *= 4.0) out.lambdas.push_back(l);
  out.op_norms.assign(out.lambdas.size(), 0.0);
  const GridSpec& g = u0.grid();
  const FieldSeries uF = heat_series(u0, tg);
  const std::vector<double> cum = integral_U(u0, tg).cumulative;
  bool zero = true;
  for (std::size_t i = 0; i < uF.size() && zero; ++i) zero = all_zero(uF.packed(i));
  if (!zero) {
    for (int p = 0; p < probes; ++p) {
      const VectorField w = random_solenoidal(g, 0.5 * g.cutoff(), seed + std::uint64_t(p) * 7919u);
      const FieldSeries v = heat_series(w, tg);
      FieldSeries q = duhamel_Q(uF, v, tg);
      q *= 2.0;
      const auto nv = koch_tataru_ladder([&](std::size_t i) { return v.get(i); }, tg, out.lambdas, cum);
      const auto nq = koch_tataru_ladder([&](std::size_t i) { return q.get(i); }, tg, out.lambdas, cum);
      for (std::size_t l = 0; l < out.lambdas.size(); ++l)
        if (nv[l].value > 0.0) out.op_norms[l] = std::max(out.op_norms[l], nq[l].value / nv[l].value);
    }
  }
  for (std::size_t l = 0; l < out.lambdas.size(); ++l)
    if (out.op_norms[l] <= 0.25) {
      out.lambda = out.lambdas[l];
      out.found = true;
      break;
    }
  if (!out.found) out.lambda = out.lambdas.back();
  // Fit over the range where the weight actually bites (norm below 90% of its lambda = 1 value).
  std::vector<double> xs, ys;
  for (std::size_t l = 0; l < out.lambdas.size(); ++l)
    if (out.op_norms[l] > 0.0 && out.op_norms[l] < 0.9 * out.op_norms[0]) {
      xs.push_back(out.lambdas[l]);
      ys.push_back(out.op_norms[l]);
    }
  if (xs.size() < 2) {
    xs.clear(), ys.clear();
    for (std::size_t l = 0; l < out.lambdas.size(); ++l)
      if (out.op_norms[l] > 0.0) xs.push_back(out.lambdas[l]), ys.push_back(out.op_norms[l]);
  }
  if (xs.size() >= 2) out.fitted_exponent = loglog_fit(xs, ys).slope;
  return out;
}

}  // namespace nswp
