#include "nswp/carleson.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "nswp/fft.hpp"
#include "nswp/operators.hpp"
#include "nswp/simd.hpp"

namespace nswp {

nlohmann::json KTReport::to_json() const {
  return {{"value", value},
          {"sup_part", sup_part},
          {"carleson_part", carleson_part},
          {"radii", radii},
          {"carleson_per_radius", carleson_per_radius}};
}

KTAccumulator::KTAccumulator(const GridSpec& g, const TimeGrid& tg) : g_(g), tg_(tg) {
  for (double R = g.dx(); R <= 0.5 * g.L * (1.0 + 1e-12); R *= 2.0) {
    radii_.push_back(R);
    wR_.push_back(tg.weights_dt_upto(R * R));
    W_.emplace_back(g.size(), 0.0);
  }
}

void KTAccumulator::add(std::size_t i, const VectorField& v, double factor) {
  if (i >= tg_.size()) throw std::out_of_range("kt: node index");
  if (!v.grid().same_as(g_)) throw GridError("kt: grid mismatch");
  add_physical(i, {to_physical(v[0]), to_physical(v[1]), to_physical(v[2])}, factor);
}

void KTAccumulator::add_physical(std::size_t i, const std::array<CVec, 3>& x, double factor) {
  if (i >= tg_.size()) throw std::out_of_range("kt: node index");
  const double m = std::abs(factor) * simd::kernels().max_norm3(x[0].data(), x[1].data(), x[2].data(), x[0].size());
  sup_ = std::max(sup_, std::sqrt(tg_.t[i]) * m);
  bool needed = false;
  for (const auto& w : wR_) needed = needed || w[i] != 0.0;
  if (!needed) return;
  RVec mag(g_.size());
  const double f2 = factor * factor;
  for (std::size_t q = 0; q < mag.size(); ++q)
    mag[q] = f2 * (std::norm(x[0][q]) + std::norm(x[1][q]) + std::norm(x[2][q]));
  for (std::size_t r = 0; r < radii_.size(); ++r) {
    const double w = wR_[r][i];
    if (w == 0.0) continue;
    RVec& W = W_[r];
    for (std::size_t q = 0; q < mag.size(); ++q) W[q] += w * mag[q];
  }
}

double lattice_ball_max(const RVec& W, const GridSpec& g, double R, int stride) {
  const int n = g.n;
  const double dx = g.dx();
  CVec ball(g.size()), f(g.size());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const double x = g.coord(a), y = g.coord(b), z = g.coord(c);
        if (x * x + y * y + z * z <= R * R * (1.0 + 1e-12)) ball[g.index(a, b, c)] = 1.0;
      }
  for (std::size_t q = 0; q < f.size(); ++q) f[q] = W[q];
  fft::forward(ball.data(), n);
  fft::forward(f.data(), n);
  // The ball is symmetric, so correlation and convolution coincide.
  simd::kernels().mul(f.data(), f.data(), ball.data(), f.size());
  fft::backward(f.data(), n);
  const double scale = dx * dx * dx / double(g.size());
  double best = 0.0;
  stride = std::max(stride, 1);
  for (int a = 0; a < n; a += stride)
    for (int b = 0; b < n; b += stride)
      for (int c = 0; c < n; c += stride) best = std::max(best, scale * f[g.index(a, b, c)].real());
  return best;
}

KTReport KTAccumulator::finish() const {
  KTReport r;
  r.sup_part = sup_;
  r.radii = radii_;
  for (std::size_t k = 0; k < radii_.size(); ++k) {
    const double R = radii_[k];
    const int stride = int(std::lround(0.5 * R / g_.dx()));
    const double m = lattice_ball_max(W_[k], g_, R, stride);
    const double val = std::sqrt(std::max(m, 0.0)) / std::pow(R, 1.5);
    r.carleson_per_radius.push_back(val);
    r.carleson_part = std::max(r.carleson_part, val);
  }
  r.value = r.sup_part + r.carleson_part;
  return r;
}

KTReport koch_tataru_norm(const SeriesFn& v, const TimeGrid& tg, double lambda,
                          const std::vector<double>& cumU) {
  if (lambda < 0.0) throw std::invalid_argument("kt: lambda must be >= 0");
  if (!cumU.empty() && cumU.size() != tg.size()) throw std::invalid_argument("kt: cumU size mismatch");
  std::unique_ptr<KTAccumulator> acc;
  for (std::size_t i = 0; i < tg.size(); ++i) {
    VectorField f = v(i);
    if (!acc) acc = std::make_unique<KTAccumulator>(f.grid(), tg);
    const double factor = cumU.empty() ? 1.0 : std::exp(-lambda * cumU[i]);
    acc->add(i, f, factor);
  }
  if (!acc) return {};
  return acc->finish();
}

std::vector<KTReport> koch_tataru_ladder(const SeriesFn& v, const TimeGrid& tg,
                                         const std::vector<double>& lambdas,
                                         const std::vector<double>& cumU) {
  if (cumU.size() != tg.size()) throw std::invalid_argument("kt: cumU size mismatch");
  std::vector<KTAccumulator> acc;
  for (std::size_t i = 0; i < tg.size(); ++i) {
    VectorField f = v(i);
    if (acc.empty())
      for (std::size_t l = 0; l < lambdas.size(); ++l) acc.emplace_back(f.grid(), tg);
    std::array<CVec, 3> x{to_physical(f[0]), to_physical(f[1]), to_physical(f[2])};
    for (std::size_t l = 0; l < lambdas.size(); ++l) acc[l].add_physical(i, x, std::exp(-lambdas[l] * cumU[i]));
  }
  std::vector<KTReport> out;
  for (auto& a : acc) out.push_back(a.finish());
  if (out.empty()) out.resize(lambdas.size());
  return out;
}

KTReport bmo_minus1_norm(const VectorField& u0, const TimeGrid& tg) {
  KTAccumulator acc(u0.grid(), tg);
  for (std::size_t i = 0; i < tg.size(); ++i) acc.add(i, heat_flow(u0, tg.t[i]));
  return acc.finish();
}

}  // namespace nswp
