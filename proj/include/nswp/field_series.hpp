#pragma once
// Time-indexed vector fields on a TimeGrid, stored as retained (dealiased) modes only.
// A series may carry its t = 0 value, which the Duhamel head interval uses.

#include <memory>
#include <optional>
#include <vector>

#include "nswp/spectral_core.hpp"
#include "nswp/time_grid.hpp"

namespace nswp {

class FieldSeries {
 public:
  FieldSeries() = default;
  FieldSeries(const GridSpec& g, std::size_t nodes);

  const GridSpec& grid() const { return grid_; }
  std::size_t size() const { return data_.size(); }
  std::size_t retained() const { return idx_ ? idx_->size() : 0; }

  void set(std::size_t i, const VectorField& v);
  VectorField get(std::size_t i) const;

  void set_initial(const VectorField& v);
  std::optional<VectorField> initial() const;

  // Packed access: 3 * retained() coefficients per node, component-major.
  const CVec& packed(std::size_t i) const { return data_[i]; }
  CVec& packed(std::size_t i) { return data_[i]; }
  const std::vector<std::size_t>& indices() const { return *idx_; }

  FieldSeries& operator+=(const FieldSeries& o);
  FieldSeries& operator-=(const FieldSeries& o);
  FieldSeries& operator*=(double s);

 private:
  GridSpec grid_;
  std::shared_ptr<const std::vector<std::size_t>> idx_;
  std::vector<CVec> data_;
  CVec initial_;
  bool has_initial_ = false;

  CVec pack(const VectorField& v) const;
  VectorField unpack(const CVec& p) const;
};

FieldSeries operator+(FieldSeries a, const FieldSeries& b);
FieldSeries operator-(FieldSeries a, const FieldSeries& b);
FieldSeries operator*(double s, FieldSeries a);

// S(t_i) u0 with u0 as the initial value.
FieldSeries heat_series(const VectorField& u0, const TimeGrid& tg);

}  // namespace nswp
