#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hypersurf/grid.hpp"

namespace hypersurf {

enum class Slot : std::uint8_t { Lower, Upper };

// Per-point multi-index array on a grid. Components of a point are stored
// row-major in slot order; `valid` marks points where the values are defined.
class TensorField {
 public:
  TensorField() = default;
  TensorField(ChartGrid grid, std::vector<Slot> slots);

  static TensorField scalar(ChartGrid grid) { return TensorField(std::move(grid), {}); }
  static TensorField covariant(ChartGrid grid, int rank) {
    return TensorField(std::move(grid), std::vector<Slot>(rank, Slot::Lower));
  }

  const ChartGrid& grid() const { return grid_; }
  const std::vector<Slot>& slots() const { return slots_; }
  int rank() const { return static_cast<int>(slots_.size()); }
  int lower_count() const;
  int upper_count() const;
  std::size_t components() const { return components_; }

  std::span<double> at(std::size_t p) { return {values_.data() + p * components_, components_}; }
  std::span<const double> at(std::size_t p) const { return {values_.data() + p * components_, components_}; }

  bool valid(std::size_t p) const { return valid_[p] != 0; }
  void set_valid(std::size_t p, bool v) { valid_[p] = v ? 1 : 0; }
  std::size_t valid_count() const;

  // Rank-2 view helpers.
  Mat matrix(std::size_t p) const;
  void set_matrix(std::size_t p, const Mat& m);

  // Declares (and checks on validate()) symmetry of a rank-2 field.
  void declare_symmetric(bool s = true) { symmetric_ = s; }
  bool symmetric() const { return symmetric_; }
  // Throws SchemaError if a declared symmetry fails.
  void validate(double rel_tol = 1e-12) const;

  std::vector<double>& raw() { return values_; }
  const std::vector<double>& raw() const { return values_; }

 private:
  ChartGrid grid_;
  std::vector<Slot> slots_;
  std::size_t components_ = 1;
  std::vector<double> values_;
  std::vector<std::uint8_t> valid_;
  bool symmetric_ = false;
};

}  // namespace hypersurf
