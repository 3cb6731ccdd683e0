#pragma once

#include <cstdint>
#include <vector>

#include "hypersurf/grid.hpp"
#include "hypersurf/parallel.hpp"

namespace hypersurf::detail {

// Spine-and-fiber traversal. Starting from `p0`, every reached node is
// extended along axis_order[0] in both directions, then every node reached so
// far along axis_order[1], and so on, so each node is reached exactly once.
// advance(axis, dir, from, to, state) moves `state` from node `from` to its
// neighbour `to` and returns false to stop that direction.
template <class State, class Advance>
void sweep(const ChartGrid& grid, std::size_t p0, const std::vector<int>& axis_order, std::vector<State>& states,
           std::vector<std::uint8_t>& reached, Advance&& advance) {
  reached.assign(grid.size(), 0);
  reached[p0] = 1;
  std::vector<std::size_t> frontier{p0};
  for (int axis : axis_order) {
    const std::size_t stride = grid.stride(axis);
    const int len = grid.shape()[axis];
    std::vector<std::vector<std::size_t>> added(frontier.size());
    parallel_for(frontier.size(), [&](std::size_t k) {
      const std::size_t start = frontier[k];
      const int i0 = static_cast<int>((start / stride) % static_cast<std::size_t>(len));
      for (int dir : {+1, -1}) {
        State state = states[start];
        std::size_t from = start;
        for (int i = i0 + dir; i >= 0 && i < len; i += dir) {
          const std::size_t to = dir > 0 ? from + stride : from - stride;
          if (!advance(axis, dir, from, to, state)) break;
          states[to] = state;
          reached[to] = 1;
          added[k].push_back(to);
          from = to;
        }
      }
    });
    for (const auto& a : added) frontier.insert(frontier.end(), a.begin(), a.end());
  }
}

// One grid cell of classical RK4 along a coordinate line. rhs(frac, y) is
// dy/dx^axis at fractional position `frac` in [0, 1] measured from the lower
// node of the cell; `dir` = +1 walks from frac 0 to 1, -1 from 1 to 0.
template <class Vector, class Rhs>
Vector rk4_cell(const Vector& y0, int dir, double h, int substeps, Rhs&& rhs) {
  Vector y = y0;
  const double dt = 1.0 / substeps;
  const double step = dir * h * dt;
  double frac = dir > 0 ? 0.0 : 1.0;
  const double dfrac = dir * dt;
  for (int s = 0; s < substeps; ++s) {
    const Vector k1 = rhs(frac, y);
    const Vector k2 = rhs(frac + 0.5 * dfrac, Vector(y + 0.5 * step * k1));
    const Vector k3 = rhs(frac + 0.5 * dfrac, Vector(y + 0.5 * step * k2));
    const Vector k4 = rhs(frac + dfrac, Vector(y + step * k3));
    y += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    frac += dfrac;
  }
  return y;
}

}  // namespace hypersurf::detail
