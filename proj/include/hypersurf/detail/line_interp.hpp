#pragma once

#include <cstdint>
#include <vector>

#include "hypersurf/grid.hpp"
#include "hypersurf/metric.hpp"
#include "hypersurf/tensor.hpp"

namespace hypersurf::detail {

// Fixed-width per-node records with a validity mask.
struct NodeTable {
  const ChartGrid* grid = nullptr;
  int width = 0;
  std::vector<double> values;
  std::vector<std::uint8_t> valid;

  NodeTable() = default;
  NodeTable(const ChartGrid& g, int w) : grid(&g), width(w), values(g.size() * w, 0.0), valid(g.size(), 0) {}
  double* at(std::size_t p) { return values.data() + p * width; }
  const double* at(std::size_t p) const { return values.data() + p * width; }
};

// Value at fraction s in [0, 1] between node `base` and its +axis neighbour.
// Uses a four-node Lagrange cubic inside the run of valid nodes, falling back
// to linear. Returns false when the two cell nodes are not both valid.
bool interpolate_line(const NodeTable& table, std::size_t base, int axis, double s, double* out);

// Inverse metric and Christoffel symbols on grid lines: exact for
// evaluator-backed metrics, interpolated from nodal values otherwise.
class MetricSampler {
 public:
  explicit MetricSampler(const MetricField& metric);

  bool available(std::size_t p) const;
  bool node(std::size_t p, Mat& ginv, Tensor3& gamma) const;
  bool line(std::size_t base, int axis, double s, Mat& ginv, Tensor3& gamma) const;

 private:
  void unpack(const double* v, Mat& ginv, Tensor3& gamma) const;

  const MetricField* metric_;
  int n_;
  NodeTable table_;
};

}  // namespace hypersurf::detail

namespace hypersurf::detail {

// Derivative of nodal records along `axis` at node p from five valid nodes
// (centred where possible, one-sided near the edge of the valid region), or
// from three when five are not available. Returns false otherwise.
bool nodal_derivative(const NodeTable& table, std::size_t p, int axis, double* out);

}  // namespace hypersurf::detail
