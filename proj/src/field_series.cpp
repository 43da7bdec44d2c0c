#include "nswp/field_series.hpp"

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "nswp/operators.hpp"

namespace nswp {

namespace {

std::shared_ptr<const std::vector<std::size_t>> retained_indices(const GridSpec& g) {
  static std::mutex mu;
  static std::map<std::tuple<int, double, double>, std::shared_ptr<const std::vector<std::size_t>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(g.n, g.L, g.dealias_fraction);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  if (cache.size() > 12) cache.clear();
  const auto w = wavenumbers(g);
  auto v = std::make_shared<std::vector<std::size_t>>();
  for (std::size_t i = 0; i < w->retain.size(); ++i)
    if (w->retain[i] != 0.0) v->push_back(i);
  cache.emplace(key, v);
  return v;
}

}  // namespace

FieldSeries::FieldSeries(const GridSpec& g, std::size_t nodes)
    : grid_(g), idx_(retained_indices(g)), data_(nodes, CVec(3 * idx_->size())) {}

CVec FieldSeries::pack(const VectorField& v) const {
  if (!v.grid().same_as(grid_)) throw GridError("series: grid mismatch");
  const std::size_t m = idx_->size();
  CVec p(3 * m);
  for (int c = 0; c < 3; ++c)
    for (std::size_t q = 0; q < m; ++q) p[c * m + q] = v[c].c[(*idx_)[q]];
  return p;
}

VectorField FieldSeries::unpack(const CVec& p) const {
  const std::size_t m = idx_->size();
  VectorField v(grid_, true);
  for (int c = 0; c < 3; ++c)
    for (std::size_t q = 0; q < m; ++q) v[c].c[(*idx_)[q]] = p[c * m + q];
  v.divergence_free = true;
  return v;
}

void FieldSeries::set(std::size_t i, const VectorField& v) { data_.at(i) = pack(v); }
VectorField FieldSeries::get(std::size_t i) const { return unpack(data_.at(i)); }

void FieldSeries::set_initial(const VectorField& v) {
  initial_ = pack(v);
  has_initial_ = true;
}

std::optional<VectorField> FieldSeries::initial() const {
  if (!has_initial_) return std::nullopt;
  return unpack(initial_);
}

FieldSeries& FieldSeries::operator+=(const FieldSeries& o) {
  if (o.size() != size() || !o.grid_.same_as(grid_)) throw GridError("series: shape mismatch");
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t q = 0; q < data_[i].size(); ++q) data_[i][q] += o.data_[i][q];
  if (has_initial_ && o.has_initial_)
    for (std::size_t q = 0; q < initial_.size(); ++q) initial_[q] += o.initial_[q];
  else if (o.has_initial_ || has_initial_)
    has_initial_ = false;  // unknown t = 0 value; fall back to the frozen head
  return *this;
}

FieldSeries& FieldSeries::operator-=(const FieldSeries& o) {
  FieldSeries neg(o);
  neg *= -1.0;
  return *this += neg;
}

FieldSeries& FieldSeries::operator*=(double s) {
  for (auto& d : data_)
    for (auto& x : d) x *= s;
  for (auto& x : initial_) x *= s;
  return *this;
}

FieldSeries operator+(FieldSeries a, const FieldSeries& b) { return a += b; }
FieldSeries operator-(FieldSeries a, const FieldSeries& b) { return a -= b; }
FieldSeries operator*(double s, FieldSeries a) { return a *= s; }

FieldSeries heat_series(const VectorField& u0, const TimeGrid& tg) {
  FieldSeries s(u0.grid(), tg.size());
  for (std::size_t i = 0; i < tg.size(); ++i) s.set(i, heat_flow(u0, tg.t[i]));
  s.set_initial(u0);
  return s;
}

}  // namespace nswp
