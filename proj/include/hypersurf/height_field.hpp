#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "hypersurf/grid.hpp"
#include "hypersurf/metric.hpp"
#include "hypersurf/tensor_field.hpp"

namespace hypersurf {

// Height function reconstructed from a second fundamental form.
struct HeightField {
  ChartGrid grid;
  std::size_t base = 0;
  std::vector<double> h;
  std::vector<Vec> grad;            // h_;a
  std::vector<Mat> hessian;         // h_;ab = sqrt(1 - |grad h|^2) Pi_ab
  std::vector<double> grad_norm_sq;  // g^ab h_;a h_;b
  std::vector<std::uint8_t> valid;

  bool is_valid(std::size_t p) const { return valid[p] != 0; }
  std::size_t valid_count() const;
  TensorField scalar_field() const;
};

struct HeightOptions {
  int substeps = 4;
  double clamp = 1e-6;          // stop where 1 - |grad h|^2 <= clamp
  std::vector<int> axis_order;  // empty: 0, 1, ..., n-1
};

// Integrates D h_;a / dx^b = sqrt(1 - g^mn h_;m h_;n) Pi_ab together with
// dh = h_;a dx^a along spine-and-fiber paths from `p0`.
// Throws InvalidSeed when the seed violates |grad0|_g < 1 or lies off the
// region where Pi and the connection are defined.
HeightField integrate_height(const TensorField& pi, const MetricField& metric, const GridIndex& p0, double h0,
                             const Vec& grad0, const HeightOptions& options = {});

// Largest g-norm difference of the gradients obtained with ascending and
// descending axis orders, over max |grad| + 1.
double path_independence_residual(const TensorField& pi, const MetricField& metric, const GridIndex& p0, double h0,
                                  const Vec& grad0, const HeightOptions& options = {});

// pi / (2 r) with r the largest |eigenvalue| of Pi in a g-orthonormal frame
// over the grid; +infinity when Pi vanishes.
double guaranteed_radius(const TensorField& pi, const MetricField& metric);

// Node nearest to chart coordinates x (clamped to the box).
GridIndex nearest_node(const ChartGrid& grid, const Vec& x);

}  // namespace hypersurf
