#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "hypersurf/grid.hpp"
#include "hypersurf/tensor.hpp"

namespace hypersurf {

// Value and derivatives of a metric at one point.
//   dg(a, b, c)     = d_c g_ab
//   ddg(a, b, c, d) = d_c d_d g_ab
struct MetricJet {
  Mat g;
  Mat ginv;
  Tensor3 dg;
  std::optional<Tensor4> ddg;
};

// Analytic metric: fills g, and dg / ddg when the pointers are non-null.
using MetricEvaluator = std::function<void(const Vec& x, Mat& g, Tensor3* dg, Tensor4* ddg)>;

enum class StencilOrder { Second = 2, Fourth = 4 };

// Symmetric positive-definite g_ab sampled on a grid, optionally backed by an
// analytic evaluator (which then overrides finite differences) or by stored
// first derivatives (second derivatives then come from differencing those).
class MetricField {
 public:
  MetricField() = default;
  // Sampled metric; finite differences supply all derivatives.
  MetricField(ChartGrid grid, std::vector<Mat> values);
  static MetricField from_evaluator(ChartGrid grid, MetricEvaluator eval);
  // Sampled on `mask` only, with exact first derivatives at those points.
  static MetricField with_first_derivatives(ChartGrid grid, std::vector<Mat> values,
                                            std::vector<Tensor3> first_derivatives,
                                            std::vector<std::uint8_t> mask);

  const ChartGrid& grid() const { return grid_; }
  int dim() const { return grid_.dim(); }
  const Mat& value(std::size_t p) const { return values_[p]; }
  const std::vector<Mat>& values() const { return values_; }
  bool in_mask(std::size_t p) const { return mask_.empty() || mask_[p] != 0; }

  bool has_evaluator() const { return static_cast<bool>(eval_); }
  bool has_first_derivatives() const { return !first_.empty(); }

  void set_stencil_order(StencilOrder order) { order_ = order; }
  StencilOrder stencil_order() const { return order_; }
  int stencil_radius() const { return order_ == StencilOrder::Second ? 1 : 2; }

  bool jet_available(std::size_t p, bool second_derivatives = true) const;
  // Throws BoundaryStencil when the stencil leaves the grid or the mask.
  MetricJet jet(std::size_t p, bool second_derivatives = true) const;
  // Evaluator-backed metrics only.
  MetricJet jet_at(const Vec& x, bool second_derivatives = true) const;

  // Same samples with the evaluator dropped, forcing finite differences.
  MetricField sampled_copy() const;

 private:
  void check_values() const;
  bool stencil_ok(const GridIndex& idx, int radius, bool diagonal) const;

  ChartGrid grid_;
  std::vector<Mat> values_;
  std::vector<Tensor3> first_;
  std::vector<std::uint8_t> mask_;
  MetricEvaluator eval_;
  StencilOrder order_ = StencilOrder::Second;
};

}  // namespace hypersurf
