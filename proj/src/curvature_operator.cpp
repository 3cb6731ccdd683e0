#include "hypersurf/curvature_operator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hypersurf/errors.hpp"

namespace hypersurf {

TwoFormBasis::TwoFormBasis(int n) : n_(n) {
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs_.emplace_back(i, j);
}

int TwoFormBasis::index(int i, int j) const {
  // Pairs before row i: sum_{r<i} (n - 1 - r)
  return i * (2 * n_ - i - 1) / 2 + (j - i - 1);
}

double CurvatureOperator::max_abs_eigenvalue() const {
  return eigenvalues.size() ? eigenvalues.cwiseAbs().maxCoeff() : 0.0;
}

bool CurvatureOperator::positive(double rel_eps) const {
  if (eigenvalues.size() == 0) return false;
  return min_eigenvalue() > rel_eps * max_abs_eigenvalue();
}

CurvatureOperator make_operator(const Mat& symmetric_matrix) {
  const int size = static_cast<int>(symmetric_matrix.rows());
  int n = 0;
  while (n * (n - 1) / 2 < size) ++n;
  if (n * (n - 1) / 2 != size) throw Error(ErrorCode::SchemaError, "operator size is not n(n-1)/2");
  CurvatureOperator op;
  op.basis = TwoFormBasis(n);
  op.matrix = 0.5 * (symmetric_matrix + symmetric_matrix.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(op.matrix);
  op.eigenvalues = es.eigenvalues();
  op.eigenvectors = es.eigenvectors();
  return op;
}

Mat pack(const Tensor4& t) {
  const TwoFormBasis basis(t.dim());
  Mat m(basis.size(), basis.size());
  for (int p = 0; p < basis.size(); ++p)
    for (int q = 0; q < basis.size(); ++q) {
      const auto [i, j] = basis.pair(p);
      const auto [k, l] = basis.pair(q);
      m(p, q) = t(i, j, k, l);
    }
  return m;
}

Tensor4 unpack(const Mat& m, int n) {
  const TwoFormBasis basis(n);
  Tensor4 t(n);
  for (int p = 0; p < basis.size(); ++p)
    for (int q = 0; q < basis.size(); ++q) {
      const auto [i, j] = basis.pair(p);
      const auto [k, l] = basis.pair(q);
      const double v = m(p, q);
      t(i, j, k, l) = v;
      t(j, i, k, l) = -v;
      t(i, j, l, k) = -v;
      t(j, i, l, k) = v;
    }
  return t;
}

CurvatureOperator to_operator(const Tensor4& frame_tensor) { return make_operator(pack(frame_tensor)); }

CurvatureOperator to_operator(const Tensor4& covariant, const OrthonormalFrame& frame) {
  return to_operator(to_frame(covariant, frame));
}

namespace {

CurvatureOperator spectral_map(const CurvatureOperator& op, const Vec& values) {
  CurvatureOperator out;
  out.basis = op.basis;
  out.eigenvalues = values;
  out.eigenvectors = op.eigenvectors;
  out.matrix = op.eigenvectors * values.asDiagonal() * op.eigenvectors.transpose();
  out.matrix = 0.5 * (out.matrix + out.matrix.transpose());
  return out;
}

}  // namespace

CurvatureOperator operator_log(const CurvatureOperator& op, double rel_eps) {
  if (!op.positive(rel_eps))
    throw Error(ErrorCode::NotPositiveOperator,
                "curvature operator has eigenvalue " + std::to_string(op.min_eigenvalue()), op.min_eigenvalue());
  return spectral_map(op, op.eigenvalues.array().log().matrix());
}

CurvatureOperator operator_exp(const CurvatureOperator& op) {
  // exp is monotone, so the ascending order is kept.
  return spectral_map(op, op.eigenvalues.array().exp().matrix());
}

Mat symmetric_exp(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.transpose()));
  const Mat e = es.eigenvectors() * es.eigenvalues().array().exp().matrix().asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (e + e.transpose());
}

Tensor4 kulkarni_nomizu(const Mat& h, const Mat& k) {
  const int n = static_cast<int>(h.rows());
  Tensor4 t(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          t(a, b, c, d) = h(a, c) * k(b, d) + h(b, d) * k(a, c) - h(a, d) * k(b, c) - h(b, c) * k(a, d);
  return t;
}

Tensor4 wedge_square(const Mat& pi) {
  const int n = static_cast<int>(pi.rows());
  Tensor4 t(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) t(a, b, c, d) = pi(a, c) * pi(b, d) - pi(a, d) * pi(b, c);
  return t;
}

RStarDecomposition decompose(const Tensor4& r, double rel_tol) {
  const int n = r.dim();
  if (n < 3) throw Error(ErrorCode::UnsupportedDimension, "decomposition needs n >= 3", n);
  double scale = 0.0;
  double defect = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          const double v = r(a, b, c, d);
          scale = std::max(scale, std::abs(v));
          defect = std::max({defect, std::abs(v + r(b, a, c, d)), std::abs(v + r(a, b, d, c)),
                             std::abs(v - r(c, d, a, b))});
        }
  if (defect > rel_tol * std::max(scale, 1e-300) && defect > 0.0)
    throw Error(ErrorCode::NotCurvatureLike, "tensor lacks curvature symmetries", defect / std::max(scale, 1e-300));

  RStarDecomposition out;
  out.ricci_star = Mat::Zero(n, n);
  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d)
      for (int a = 0; a < n; ++a) out.ricci_star(b, d) += r(a, b, a, d);
  out.ricci_star = 0.5 * (out.ricci_star + out.ricci_star.transpose());
  out.scalar_star = out.ricci_star.trace();
  const Mat id = Mat::Identity(n, n);
  out.schouten_star = (out.ricci_star - out.scalar_star / (2.0 * (n - 1)) * id) / (n - 2.0);
  out.weyl_star = r - kulkarni_nomizu(out.schouten_star, id);
  return out;
}

}  // namespace hypersurf
