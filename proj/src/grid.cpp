#include "hypersurf/grid.hpp"

#include <algorithm>
#include <string>

#include "hypersurf/errors.hpp"

namespace hypersurf {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::BoundaryStencil: return "BoundaryStencil";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NotPositiveOperator: return "NotPositiveOperator";
    case ErrorCode::NotCurvatureLike: return "NotCurvatureLike";
    case ErrorCode::WeylObstruction: return "WeylObstruction";
    case ErrorCode::InvalidSeed: return "InvalidSeed";
    case ErrorCode::FlatnessViolation: return "FlatnessViolation";
    case ErrorCode::SingularCouplingMatrix: return "SingularCouplingMatrix";
    case ErrorCode::EmptyLevelBand: return "EmptyLevelBand";
    case ErrorCode::DegenerateGradient: return "DegenerateGradient";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::SpecError: return "SpecError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::SchemaError: return "SchemaError";
  }
  return "UnknownError";
}

ChartGrid::ChartGrid(Vec origin, Vec spacing, std::vector<int> shape)
    : origin_(std::move(origin)), spacing_(std::move(spacing)), shape_(std::move(shape)) {
  const auto n = shape_.size();
  if (n == 0) throw Error(ErrorCode::InvalidGrid, "grid dimension must be >= 1");
  if (static_cast<std::size_t>(origin_.size()) != n || static_cast<std::size_t>(spacing_.size()) != n)
    throw Error(ErrorCode::InvalidGrid, "origin/spacing/shape lengths differ");
  for (std::size_t a = 0; a < n; ++a) {
    if (!(spacing_[a] > 0.0))
      throw Error(ErrorCode::InvalidGrid, "spacing must be positive on axis " + std::to_string(a));
    if (shape_[a] < 5)
      throw Error(ErrorCode::InvalidGrid, "shape must be >= 5 on axis " + std::to_string(a));
  }
  strides_.assign(n, 1);
  for (int a = static_cast<int>(n) - 2; a >= 0; --a) strides_[a] = strides_[a + 1] * shape_[a + 1];
  size_ = strides_[0] * shape_[0];
}

std::size_t ChartGrid::linear(const GridIndex& idx) const {
  std::size_t lin = 0;
  for (int a = 0; a < dim(); ++a) lin += strides_[a] * static_cast<std::size_t>(idx[a]);
  return lin;
}

GridIndex ChartGrid::multi(std::size_t lin) const {
  GridIndex idx(shape_.size());
  for (int a = 0; a < dim(); ++a) {
    idx[a] = static_cast<int>(lin / strides_[a]);
    lin %= strides_[a];
  }
  return idx;
}

Vec ChartGrid::coords(const GridIndex& idx) const {
  Vec x(dim());
  for (int a = 0; a < dim(); ++a) x[a] = origin_[a] + spacing_[a] * idx[a];
  return x;
}

bool ChartGrid::contains(const GridIndex& idx) const {
  if (static_cast<int>(idx.size()) != dim()) return false;
  for (int a = 0; a < dim(); ++a)
    if (idx[a] < 0 || idx[a] >= shape_[a]) return false;
  return true;
}

int ChartGrid::margin(const GridIndex& idx) const {
  int m = shape_[0];
  for (int a = 0; a < dim(); ++a) m = std::min({m, idx[a], shape_[a] - 1 - idx[a]});
  return m;
}

GridIndex ChartGrid::center() const {
  GridIndex idx(shape_.size());
  for (int a = 0; a < dim(); ++a) idx[a] = (shape_[a] - 1) / 2;
  return idx;
}

bool ChartGrid::operator==(const ChartGrid& other) const {
  return shape_ == other.shape_ && origin_ == other.origin_ && spacing_ == other.spacing_;
}

void require_same_grid(const ChartGrid& a, const ChartGrid& b, const char* context) {
  if (a != b) throw Error(ErrorCode::GridMismatch, std::string(context) + ": fields live on different grids");
}

}  // namespace hypersurf
