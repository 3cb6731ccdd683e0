#include "hypersurf/height_field.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hypersurf/detail/line_interp.hpp"
#include "hypersurf/detail/sweep.hpp"
#include "hypersurf/errors.hpp"
#include "hypersurf/frame.hpp"

namespace hypersurf {

std::size_t HeightField::valid_count() const {
  return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), std::uint8_t{1}));
}

TensorField HeightField::scalar_field() const {
  TensorField f = TensorField::scalar(grid);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    f.at(p)[0] = h[p];
    f.set_valid(p, is_valid(p));
  }
  return f;
}

GridIndex nearest_node(const ChartGrid& grid, const Vec& x) {
  GridIndex idx(grid.dim());
  for (int a = 0; a < grid.dim(); ++a) {
    const long i = std::lround((x[a] - grid.origin()[a]) / grid.spacing()[a]);
    idx[a] = static_cast<int>(std::clamp<long>(i, 0, grid.shape()[a] - 1));
  }
  return idx;
}

HeightField integrate_height(const TensorField& pi, const MetricField& metric, const GridIndex& p0, double h0,
                             const Vec& grad0, const HeightOptions& options) {
  require_same_grid(pi.grid(), metric.grid(), "integrate_height");
  const ChartGrid& grid = metric.grid();
  const int n = grid.dim();
  if (!grid.contains(p0)) throw Error(ErrorCode::InvalidSeed, "seed point outside the grid");
  if (grad0.size() != n) throw Error(ErrorCode::InvalidSeed, "seed gradient has wrong length");
  const std::size_t base = grid.linear(p0);

  const detail::MetricSampler sampler(metric);
  detail::NodeTable pit(grid, n * n);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    if (!pi.valid(p) || !sampler.available(p)) continue;
    std::copy(pi.at(p).begin(), pi.at(p).end(), pit.at(p));
    pit.valid[p] = 1;
  }
  if (!pit.valid[base]) throw Error(ErrorCode::InvalidSeed, "Pi or the connection is undefined at the seed point");

  Mat ginv;
  Tensor3 gamma;
  sampler.node(base, ginv, gamma);
  const double gn0 = grad0.dot(ginv * grad0);
  if (!(1.0 - gn0 > options.clamp))
    throw Error(ErrorCode::InvalidSeed, "seed gradient must satisfy g^ab h_a h_b < 1", gn0);

  std::vector<int> order = options.axis_order;
  if (order.empty()) {
    order.resize(n);
    std::iota(order.begin(), order.end(), 0);
  }

  std::vector<Vec> states(grid.size());
  Vec y0(n + 1);
  y0[0] = h0;
  y0.tail(n) = grad0;
  states[base] = y0;

  auto advance = [&](int axis, int dir, std::size_t from, std::size_t to, Vec& y) {
    if (!pit.valid[to]) return false;
    const std::size_t lower = std::min(from, to);
    std::vector<double> pv(n * n);
    bool ok = true;
    auto rhs = [&](double frac, const Vec& s) {
      Mat gi;
      Tensor3 gm;
      Vec dy = Vec::Zero(n + 1);
      if (!detail::interpolate_line(pit, lower, axis, frac, pv.data()) || !sampler.line(lower, axis, frac, gi, gm)) {
        ok = false;
        return dy;
      }
      const Vec g = s.tail(n);
      const double root = std::sqrt(std::max(0.0, 1.0 - g.dot(gi * g)));
      dy[0] = g[axis];
      for (int a = 0; a < n; ++a) {
        double v = root * pv[a * n + axis];
        for (int c = 0; c < n; ++c) v += gm(c, a, axis) * g[c];
        dy[1 + a] = v;
      }
      return dy;
    };
    const Vec next = detail::rk4_cell(y, dir, grid.spacing()[axis], options.substeps, rhs);
    if (!ok || !next.allFinite()) return false;
    Mat gi;
    Tensor3 gm;
    sampler.node(to, gi, gm);
    const Vec g = next.tail(n);
    if (!(1.0 - g.dot(gi * g) > options.clamp)) return false;
    y = next;
    return true;
  };

  HeightField out;
  out.grid = grid;
  out.base = base;
  detail::sweep(grid, base, order, states, out.valid, advance);

  out.h.assign(grid.size(), 0.0);
  out.grad.assign(grid.size(), Vec());
  out.hessian.assign(grid.size(), Mat());
  out.grad_norm_sq.assign(grid.size(), 0.0);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    if (!out.valid[p]) continue;
    Mat gi;
    Tensor3 gm;
    sampler.node(p, gi, gm);
    out.h[p] = states[p][0];
    out.grad[p] = states[p].tail(n);
    out.grad_norm_sq[p] = out.grad[p].dot(gi * out.grad[p]);
    out.hessian[p] = std::sqrt(std::max(0.0, 1.0 - out.grad_norm_sq[p])) * pi.matrix(p);
  }
  return out;
}

double path_independence_residual(const TensorField& pi, const MetricField& metric, const GridIndex& p0, double h0,
                                  const Vec& grad0, const HeightOptions& options) {
  const int n = metric.dim();
  HeightOptions fwd = options;
  HeightOptions rev = options;
  fwd.axis_order.resize(n);
  std::iota(fwd.axis_order.begin(), fwd.axis_order.end(), 0);
  rev.axis_order.assign(fwd.axis_order.rbegin(), fwd.axis_order.rend());
  const HeightField a = integrate_height(pi, metric, p0, h0, grad0, fwd);
  const HeightField b = integrate_height(pi, metric, p0, h0, grad0, rev);
  double diff = 0.0;
  double scale = 0.0;
  for (std::size_t p = 0; p < metric.grid().size(); ++p) {
    if (!a.is_valid(p) || !b.is_valid(p)) continue;
    const OrthonormalFrame f = orthonormal_frame(metric.value(p));
    // Covector norm: components against the frame vectors.
    diff = std::max(diff, (f.frame.transpose() * (a.grad[p] - b.grad[p])).norm());
    scale = std::max({scale, std::sqrt(a.grad_norm_sq[p]), std::sqrt(b.grad_norm_sq[p])});
  }
  return diff / (scale + 1.0);
}

double guaranteed_radius(const TensorField& pi, const MetricField& metric) {
  require_same_grid(pi.grid(), metric.grid(), "guaranteed_radius");
  double r = 0.0;
  for (std::size_t p = 0; p < pi.grid().size(); ++p) {
    if (!pi.valid(p)) continue;
    const Mat pf = to_frame(pi.matrix(p), orthonormal_frame(metric.value(p)));
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (pf + pf.transpose()), Eigen::EigenvaluesOnly);
    r = std::max(r, es.eigenvalues().cwiseAbs().maxCoeff());
  }
  if (r == 0.0) return std::numeric_limits<double>::infinity();
  return std::acos(-1.0) / (2.0 * r);
}

}  // namespace hypersurf
