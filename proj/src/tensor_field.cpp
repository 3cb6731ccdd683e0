#include "hypersurf/tensor_field.hpp"

#include <algorithm>
#include <cmath>

#include "hypersurf/errors.hpp"

namespace hypersurf {

TensorField::TensorField(ChartGrid grid, std::vector<Slot> slots)
    : grid_(std::move(grid)), slots_(std::move(slots)) {
  for (std::size_t i = 0; i < slots_.size(); ++i) components_ *= static_cast<std::size_t>(grid_.dim());
  values_.assign(grid_.size() * components_, 0.0);
  valid_.assign(grid_.size(), 0);
}

int TensorField::lower_count() const {
  return static_cast<int>(std::count(slots_.begin(), slots_.end(), Slot::Lower));
}

int TensorField::upper_count() const { return rank() - lower_count(); }

std::size_t TensorField::valid_count() const {
  return static_cast<std::size_t>(std::count(valid_.begin(), valid_.end(), std::uint8_t{1}));
}

Mat TensorField::matrix(std::size_t p) const {
  const int n = grid_.dim();
  Mat m(n, n);
  const double* v = values_.data() + p * components_;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) m(a, b) = v[a * n + b];
  return m;
}

void TensorField::set_matrix(std::size_t p, const Mat& m) {
  const int n = grid_.dim();
  double* v = values_.data() + p * components_;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) v[a * n + b] = m(a, b);
}

void TensorField::validate(double rel_tol) const {
  if (!symmetric_) return;
  if (rank() != 2) throw Error(ErrorCode::SchemaError, "symmetry declared on a non rank-2 field");
  for (std::size_t p = 0; p < grid_.size(); ++p) {
    if (!valid(p)) continue;
    const Mat m = matrix(p);
    const double scale = std::max(m.norm(), 1e-300);
    if ((m - m.transpose()).norm() > rel_tol * scale)
      throw Error(ErrorCode::SchemaError, "declared symmetric field is not symmetric at point " + std::to_string(p));
  }
}

}  // namespace hypersurf
