#include "hypersurf/frame.hpp"

#include <cmath>

#include "hypersurf/errors.hpp"

namespace hypersurf {

namespace {

// Applies M (rows = new index, cols = old index) to slot `k` of a rank-r
// tensor with n components per slot.
std::vector<double> mode_product(const std::vector<double>& t, int n, int r, int k, const Mat& m) {
  std::vector<double> out(t.size(), 0.0);
  std::size_t inner = 1;
  for (int s = k + 1; s < r; ++s) inner *= static_cast<std::size_t>(n);
  const std::size_t outer = t.size() / (inner * static_cast<std::size_t>(n));
  for (std::size_t o = 0; o < outer; ++o)
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < n; ++a) {
        const double w = m(i, a);
        if (w == 0.0) continue;
        const double* src = t.data() + (o * n + a) * inner;
        double* dst = out.data() + (o * n + i) * inner;
        for (std::size_t q = 0; q < inner; ++q) dst[q] += w * src[q];
      }
  return out;
}

}  // namespace

OrthonormalFrame orthonormal_frame(const Mat& g) {
  const double scale = g.norm();
  if (!(scale > 0.0) || !g.allFinite() || (g - g.transpose()).norm() > 1e-10 * scale)
    throw Error(ErrorCode::NotPositiveDefinite, "metric value is not a finite symmetric matrix");
  Eigen::LLT<Mat> llt(g);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::NotPositiveDefinite, "Cholesky factorisation failed");
  const Mat l = llt.matrixL();
  for (int i = 0; i < l.rows(); ++i)
    if (!(l(i, i) > 0.0)) throw Error(ErrorCode::NotPositiveDefinite, "metric has a non-positive pivot", l(i, i));
  OrthonormalFrame f;
  f.coframe = l.transpose();
  f.frame = l.transpose().triangularView<Eigen::Upper>().solve(Mat::Identity(g.rows(), g.cols()));
  return f;
}

Mat to_frame(const Mat& covariant, const OrthonormalFrame& f) {
  return f.frame.transpose() * covariant * f.frame;
}

Mat from_frame(const Mat& frame_components, const OrthonormalFrame& f) {
  return f.coframe.transpose() * frame_components * f.coframe;
}

Tensor4 to_frame(const Tensor4& covariant, const OrthonormalFrame& f) {
  const int n = covariant.dim();
  std::vector<double> t(covariant.data(), covariant.data() + covariant.size());
  const Mat et = f.frame.transpose();
  for (int k = 0; k < 4; ++k) t = mode_product(t, n, 4, k, et);
  Tensor4 out(n);
  std::copy(t.begin(), t.end(), out.data());
  return out;
}

Tensor4 from_frame(const Tensor4& frame_components, const OrthonormalFrame& f) {
  const int n = frame_components.dim();
  std::vector<double> t(frame_components.data(), frame_components.data() + frame_components.size());
  const Mat tt = f.coframe.transpose();
  for (int k = 0; k < 4; ++k) t = mode_product(t, n, 4, k, tt);
  Tensor4 out(n);
  std::copy(t.begin(), t.end(), out.data());
  return out;
}

double metric_norm(std::span<const double> components, const std::vector<Slot>& slots,
                   const OrthonormalFrame& f) {
  const int n = static_cast<int>(f.frame.rows());
  const int r = static_cast<int>(slots.size());
  std::vector<double> t(components.begin(), components.end());
  const Mat et = f.frame.transpose();
  for (int k = 0; k < r; ++k) t = mode_product(t, n, r, k, slots[k] == Slot::Lower ? et : f.coframe);
  double s = 0.0;
  for (double v : t) s += v * v;
  return std::sqrt(s);
}

}  // namespace hypersurf
