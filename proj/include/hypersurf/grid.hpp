#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace hypersurf {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using GridIndex = std::vector<int>;

// Rectangular lattice over a box in R^n. Points are stored row-major: axis 0
// varies slowest.
class ChartGrid {
 public:
  ChartGrid() = default;
  ChartGrid(Vec origin, Vec spacing, std::vector<int> shape);

  int dim() const { return static_cast<int>(shape_.size()); }
  const Vec& origin() const { return origin_; }
  const Vec& spacing() const { return spacing_; }
  const std::vector<int>& shape() const { return shape_; }
  std::size_t size() const { return size_; }
  std::size_t stride(int axis) const { return strides_[axis]; }

  std::size_t linear(const GridIndex& idx) const;
  GridIndex multi(std::size_t lin) const;
  Vec coords(const GridIndex& idx) const;
  Vec coords(std::size_t lin) const { return coords(multi(lin)); }
  bool contains(const GridIndex& idx) const;

  // Smallest number of nodes between `idx` and the box boundary.
  int margin(const GridIndex& idx) const;

  // Index of the node nearest to the box centre.
  GridIndex center() const;

  bool operator==(const ChartGrid& other) const;
  bool operator!=(const ChartGrid& other) const { return !(*this == other); }

 private:
  Vec origin_;
  Vec spacing_;
  std::vector<int> shape_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 0;
};

// Throws GridMismatch when the grids differ.
void require_same_grid(const ChartGrid& a, const ChartGrid& b, const char* context);

}  // namespace hypersurf
