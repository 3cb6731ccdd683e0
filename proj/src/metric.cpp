#include "hypersurf/metric.hpp"

#include <array>
#include <string>

#include "hypersurf/errors.hpp"

namespace hypersurf {

namespace {

// Central-difference weights for offsets -2..2.
constexpr std::array<double, 5> kFirst2 = {0.0, -0.5, 0.0, 0.5, 0.0};
constexpr std::array<double, 5> kFirst4 = {1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0};
constexpr std::array<double, 5> kSecond2 = {0.0, 1.0, -2.0, 1.0, 0.0};
constexpr std::array<double, 5> kSecond4 = {-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0};

Mat inverse_spd(const Mat& g) {
  Eigen::LLT<Mat> llt(g);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::NotPositiveDefinite, "metric not positive definite");
  return llt.solve(Mat::Identity(g.rows(), g.cols()));
}

}  // namespace

MetricField::MetricField(ChartGrid grid, std::vector<Mat> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw Error(ErrorCode::GridMismatch, "metric sample count does not match grid");
  check_values();
}

MetricField MetricField::from_evaluator(ChartGrid grid, MetricEvaluator eval) {
  std::vector<Mat> values(grid.size());
  for (std::size_t p = 0; p < grid.size(); ++p) eval(grid.coords(p), values[p], nullptr, nullptr);
  MetricField m(std::move(grid), std::move(values));
  m.eval_ = std::move(eval);
  return m;
}

MetricField MetricField::with_first_derivatives(ChartGrid grid, std::vector<Mat> values,
                                                std::vector<Tensor3> first_derivatives,
                                                std::vector<std::uint8_t> mask) {
  MetricField m;
  m.grid_ = std::move(grid);
  m.values_ = std::move(values);
  m.first_ = std::move(first_derivatives);
  m.mask_ = std::move(mask);
  if (m.values_.size() != m.grid_.size() || m.first_.size() != m.grid_.size() || m.mask_.size() != m.grid_.size())
    throw Error(ErrorCode::GridMismatch, "metric sample count does not match grid");
  m.check_values();
  return m;
}

void MetricField::check_values() const {
  const int n = dim();
  for (std::size_t p = 0; p < values_.size(); ++p) {
    if (!in_mask(p)) continue;
    const Mat& g = values_[p];
    if (g.rows() != n || g.cols() != n) throw Error(ErrorCode::SchemaError, "metric value has wrong size");
    const double scale = g.norm();
    if (!g.allFinite() || (g - g.transpose()).norm() > 1e-12 * scale)
      throw Error(ErrorCode::SchemaError, "metric value not symmetric at point " + std::to_string(p));
    Eigen::LLT<Mat> llt(g);
    if (llt.info() != Eigen::Success)
      throw Error(ErrorCode::NotPositiveDefinite, "metric not positive definite at point " + std::to_string(p));
  }
}

bool MetricField::stencil_ok(const GridIndex& idx, int radius, bool diagonal) const {
  const int n = dim();
  if (grid_.margin(idx) < radius) return false;
  if (mask_.empty()) return true;
  GridIndex q = idx;
  for (int a = 0; a < n; ++a) {
    for (int s = -radius; s <= radius; ++s) {
      q[a] = idx[a] + s;
      if (!in_mask(grid_.linear(q))) return false;
    }
    q[a] = idx[a];
  }
  if (!diagonal) return true;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int s = -radius; s <= radius; ++s)
        for (int t = -radius; t <= radius; ++t) {
          q = idx;
          q[a] += s;
          q[b] += t;
          if (!in_mask(grid_.linear(q))) return false;
        }
  return true;
}

bool MetricField::jet_available(std::size_t p, bool second_derivatives) const {
  if (has_evaluator()) return true;
  if (!in_mask(p)) return false;
  const GridIndex idx = grid_.multi(p);
  if (has_first_derivatives()) return !second_derivatives || stencil_ok(idx, stencil_radius(), false);
  return stencil_ok(idx, stencil_radius(), second_derivatives);
}

MetricJet MetricField::jet_at(const Vec& x, bool second_derivatives) const {
  if (!has_evaluator()) throw Error(ErrorCode::BoundaryStencil, "off-grid jet requested without an analytic evaluator");
  const int n = dim();
  MetricJet j;
  j.dg = Tensor3(n);
  if (second_derivatives) j.ddg = Tensor4(n);
  eval_(x, j.g, &j.dg, second_derivatives ? &*j.ddg : nullptr);
  j.ginv = inverse_spd(j.g);
  return j;
}

MetricJet MetricField::jet(std::size_t p, bool second_derivatives) const {
  if (has_evaluator()) return jet_at(grid_.coords(p), second_derivatives);
  if (!jet_available(p, second_derivatives))
    throw Error(ErrorCode::BoundaryStencil, "finite-difference stencil leaves the valid region at point " + std::to_string(p));

  const int n = dim();
  const GridIndex idx = grid_.multi(p);
  const bool fourth = order_ == StencilOrder::Fourth;
  const auto& w1 = fourth ? kFirst4 : kFirst2;
  const auto& w2 = fourth ? kSecond4 : kSecond2;
  const int r = stencil_radius();

  MetricJet j;
  j.g = values_[p];
  j.ginv = inverse_spd(j.g);
  j.dg = Tensor3(n);

  auto offset = [&](int axis, int s) {
    GridIndex q = idx;
    q[axis] += s;
    return grid_.linear(q);
  };

  if (has_first_derivatives()) {
    j.dg = first_[p];
    if (second_derivatives) {
      Tensor4 dd(n);
      for (int d = 0; d < n; ++d) {
        const double h = grid_.spacing()[d];
        for (int s = -r; s <= r; ++s) {
          const double w = w1[s + 2] / h;
          if (w == 0.0) continue;
          const Tensor3& f = first_[offset(d, s)];
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
              for (int c = 0; c < n; ++c) dd(a, b, c, d) += w * f(a, b, c);
        }
      }
      j.ddg = std::move(dd);
    }
    return j;
  }

  for (int c = 0; c < n; ++c) {
    const double h = grid_.spacing()[c];
    Mat acc = Mat::Zero(n, n);
    for (int s = -r; s <= r; ++s)
      if (w1[s + 2] != 0.0) acc += w1[s + 2] * values_[offset(c, s)];
    acc /= h;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) j.dg(a, b, c) = acc(a, b);
  }
  if (!second_derivatives) return j;

  Tensor4 dd(n);
  for (int c = 0; c < n; ++c) {
    for (int d = c; d < n; ++d) {
      Mat acc = Mat::Zero(n, n);
      if (c == d) {
        for (int s = -r; s <= r; ++s)
          if (w2[s + 2] != 0.0) acc += w2[s + 2] * values_[offset(c, s)];
        acc /= grid_.spacing()[c] * grid_.spacing()[c];
      } else {
        for (int s = -r; s <= r; ++s) {
          if (w1[s + 2] == 0.0) continue;
          for (int t = -r; t <= r; ++t) {
            if (w1[t + 2] == 0.0) continue;
            GridIndex q = idx;
            q[c] += s;
            q[d] += t;
            acc += (w1[s + 2] * w1[t + 2]) * values_[grid_.linear(q)];
          }
        }
        acc /= grid_.spacing()[c] * grid_.spacing()[d];
      }
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          dd(a, b, c, d) = acc(a, b);
          dd(a, b, d, c) = acc(a, b);
        }
    }
  }
  j.ddg = std::move(dd);
  return j;
}

MetricField MetricField::sampled_copy() const {
  MetricField m = *this;
  m.eval_ = nullptr;
  return m;
}

}  // namespace hypersurf
