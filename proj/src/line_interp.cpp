#include "hypersurf/detail/line_interp.hpp"

#include <algorithm>

#include "hypersurf/curvature.hpp"
#include "hypersurf/parallel.hpp"

namespace hypersurf::detail {

bool interpolate_line(const NodeTable& t, std::size_t base, int axis, double s, double* out) {
  const ChartGrid& g = *t.grid;
  const std::size_t stride = g.stride(axis);
  const int len = g.shape()[axis];
  const int i = static_cast<int>((base / stride) % static_cast<std::size_t>(len));
  if (i + 1 >= len || !t.valid[base] || !t.valid[base + stride]) return false;

  auto ok = [&](int j) { return j >= 0 && j < len && t.valid[base + stride * j - stride * i] != 0; };

  // Prefer the centred stencil i-1..i+2, then the shifted ones.
  int first = -1;
  for (int lo : {i - 1, i, i - 2}) {
    if (ok(lo) && ok(lo + 1) && ok(lo + 2) && ok(lo + 3)) {
      first = lo;
      break;
    }
  }
  const int w = t.width;
  if (first < 0) {
    const double* a = t.at(base);
    const double* b = t.at(base + stride);
    for (int k = 0; k < w; ++k) out[k] = (1.0 - s) * a[k] + s * b[k];
    return true;
  }
  // Node positions relative to i, evaluated at s.
  double weights[4];
  for (int m = 0; m < 4; ++m) {
    const double xm = first + m - i;
    double l = 1.0;
    for (int q = 0; q < 4; ++q) {
      if (q == m) continue;
      const double xq = first + q - i;
      l *= (s - xq) / (xm - xq);
    }
    weights[m] = l;
  }
  std::fill(out, out + w, 0.0);
  for (int m = 0; m < 4; ++m) {
    const double* v = t.at(base + stride * (first + m) - stride * i);
    for (int k = 0; k < w; ++k) out[k] += weights[m] * v[k];
  }
  return true;
}

MetricSampler::MetricSampler(const MetricField& metric) : metric_(&metric), n_(metric.dim()) {
  if (metric.has_evaluator()) return;
  const int n = n_;
  table_ = NodeTable(metric.grid(), n * n + n * n * n);
  parallel_for(metric.grid().size(), [&](std::size_t p) {
    if (!metric.jet_available(p, false)) return;
    const MetricJet j = metric.jet(p, false);
    const Tensor3 gamma = christoffel(j);
    double* v = table_.at(p);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) v[a * n + b] = j.ginv(a, b);
    std::copy(gamma.data(), gamma.data() + gamma.size(), v + n * n);
    table_.valid[p] = 1;
  });
}

bool MetricSampler::available(std::size_t p) const {
  return metric_->has_evaluator() || table_.valid[p] != 0;
}

void MetricSampler::unpack(const double* v, Mat& ginv, Tensor3& gamma) const {
  const int n = n_;
  ginv.resize(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) ginv(a, b) = v[a * n + b];
  gamma = Tensor3(n);
  std::copy(v + n * n, v + n * n + n * n * n, gamma.data());
}

bool MetricSampler::node(std::size_t p, Mat& ginv, Tensor3& gamma) const {
  if (metric_->has_evaluator()) {
    const MetricJet j = metric_->jet_at(metric_->grid().coords(p), false);
    ginv = j.ginv;
    gamma = christoffel(j);
    return true;
  }
  if (!table_.valid[p]) return false;
  unpack(table_.at(p), ginv, gamma);
  return true;
}

bool MetricSampler::line(std::size_t base, int axis, double s, Mat& ginv, Tensor3& gamma) const {
  if (metric_->has_evaluator()) {
    Vec x = metric_->grid().coords(base);
    x[axis] += s * metric_->grid().spacing()[axis];
    const MetricJet j = metric_->jet_at(x, false);
    ginv = j.ginv;
    gamma = christoffel(j);
    return true;
  }
  std::vector<double> v(table_.width);
  if (!interpolate_line(table_, base, axis, s, v.data())) return false;
  unpack(v.data(), ginv, gamma);
  return true;
}

bool nodal_derivative(const NodeTable& t, std::size_t p, int axis, double* out) {
  // Five-point first-derivative weights (times 12) at each position of the window.
  static constexpr double kW5[5][5] = {{-25, 48, -36, 16, -3},
                                       {-3, -10, 18, -6, 1},
                                       {1, -8, 0, 8, -1},
                                       {-1, 6, -18, 10, 3},
                                       {3, -16, 36, -48, 25}};
  static constexpr double kW3[3][3] = {{-3, 4, -1}, {-1, 0, 1}, {1, -4, 3}};
  const ChartGrid& g = *t.grid;
  const std::size_t stride = g.stride(axis);
  const int len = g.shape()[axis];
  const int i = static_cast<int>((p / stride) % static_cast<std::size_t>(len));
  const double h = g.spacing()[axis];
  auto ok = [&](int off) { return i + off >= 0 && i + off < len && t.valid[p + stride * (i + off) - stride * i]; };
  auto at = [&](int off) { return t.at(p + stride * (i + off) - stride * i); };
  if (!t.valid[p]) return false;
  auto window = [&](int width, int pos) {
    for (int s = 0; s < width; ++s)
      if (!ok(s - pos)) return false;
    return true;
  };
  for (int pos : {2, 1, 3, 0, 4}) {
    if (!window(5, pos)) continue;
    for (int k = 0; k < t.width; ++k) {
      double v = 0.0;
      for (int s = 0; s < 5; ++s) v += kW5[pos][s] * at(s - pos)[k];
      out[k] = v / (12.0 * h);
    }
    return true;
  }
  for (int pos : {1, 0, 2}) {
    if (!window(3, pos)) continue;
    for (int k = 0; k < t.width; ++k) {
      double v = 0.0;
      for (int s = 0; s < 3; ++s) v += kW3[pos][s] * at(s - pos)[k];
      out[k] = v / (2.0 * h);
    }
    return true;
  }
  return false;
}

}  // namespace hypersurf::detail
