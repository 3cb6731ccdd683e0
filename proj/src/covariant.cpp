#include "hypersurf/covariant.hpp"

#include <array>

#include "hypersurf/curvature.hpp"
#include "hypersurf/parallel.hpp"

namespace hypersurf {

namespace {

constexpr std::array<double, 5> kFirst2 = {0.0, -0.5, 0.0, 0.5, 0.0};
constexpr std::array<double, 5> kFirst4 = {1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0};

}  // namespace

TensorField covariant_derivative(const MetricField& metric, const TensorField& field) {
  require_same_grid(metric.grid(), field.grid(), "covariant_derivative");
  const ChartGrid& grid = field.grid();
  const int n = grid.dim();
  const int r = field.rank();
  std::vector<Slot> slots = field.slots();
  slots.push_back(Slot::Lower);
  TensorField out(grid, slots);

  const std::size_t comps = field.components();
  std::vector<std::size_t> slot_stride(r, 1);
  for (int s = r - 2; s >= 0; --s) slot_stride[s] = slot_stride[s + 1] * n;

  const int radius = metric.stencil_radius();
  const auto& w = metric.stencil_order() == StencilOrder::Fourth ? kFirst4 : kFirst2;

  parallel_for(grid.size(), [&](std::size_t p) {
    if (!field.valid(p)) return;
    const GridIndex idx = grid.multi(p);
    if (grid.margin(idx) < radius) return;
    for (int c = 0; c < n; ++c)
      for (int s = -radius; s <= radius; ++s) {
        if (s == 0) continue;
        const std::size_t q = s > 0 ? p + grid.stride(c) * s : p - grid.stride(c) * (-s);
        if (!field.valid(q)) return;
      }
    if (!metric.jet_available(p, false)) return;
    const Tensor3 gamma = christoffel(metric, p);

    const auto t = field.at(p);
    auto o = out.at(p);
    for (int c = 0; c < n; ++c) {
      const double h = grid.spacing()[c];
      for (int s = -radius; s <= radius; ++s) {
        const double wt = w[s + 2] / h;
        if (wt == 0.0) continue;
        const std::size_t q = s > 0 ? p + grid.stride(c) * s : p - grid.stride(c) * (-s);
        const auto tq = field.at(q);
        for (std::size_t k = 0; k < comps; ++k) o[k * n + c] += wt * tq[k];
      }
    }
    for (std::size_t k = 0; k < comps; ++k) {
      for (int s = 0; s < r; ++s) {
        const int is = static_cast<int>((k / slot_stride[s]) % n);
        const std::size_t base = k - static_cast<std::size_t>(is) * slot_stride[s];
        for (int c = 0; c < n; ++c) {
          double acc = 0.0;
          if (field.slots()[s] == Slot::Lower) {
            for (int e = 0; e < n; ++e) acc -= gamma(e, is, c) * t[base + e * slot_stride[s]];
          } else {
            for (int e = 0; e < n; ++e) acc += gamma(is, e, c) * t[base + e * slot_stride[s]];
          }
          o[k * n + c] += acc;
        }
      }
    }
    out.set_valid(p, true);
  });
  return out;
}

}  // namespace hypersurf
