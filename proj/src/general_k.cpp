#include "hypersurf/general_k.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hypersurf/covariant.hpp"
#include "hypersurf/curvature_operator.hpp"
#include "hypersurf/errors.hpp"
#include "hypersurf/frame.hpp"

namespace hypersurf {

KTupleResult verify_k_tuple(const MetricField& g, const KTupleCandidate& candidate) {
  return verify_k_tuple(g, riemann(g), candidate);
}

KTupleResult verify_k_tuple(const MetricField& g, const CurvatureBundle& curvature, const KTupleCandidate& candidate) {
  require_same_grid(g.grid(), candidate.grid, "verify_k_tuple");
  require_same_grid(g.grid(), curvature.grid, "verify_k_tuple");
  const ChartGrid& grid = g.grid();
  const int n = grid.dim();
  const int k = candidate.k();
  if (k < 1) throw Error(ErrorCode::SchemaError, "candidate has no fields");

  std::vector<TensorField> grad, hess;
  for (const TensorField& f : candidate.fields) {
    require_same_grid(grid, f.grid(), "verify_k_tuple");
    if (f.rank() != 0) throw Error(ErrorCode::SchemaError, "candidate fields must be scalars");
    grad.push_back(covariant_derivative(g, f));
    hess.push_back(covariant_derivative(g, grad.back()));
  }

  KTupleResult out;
  out.min_f_eigenvalue = std::numeric_limits<double>::infinity();
  double num = 0.0, den = 0.0;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    if (!curvature.is_valid(p)) continue;
    bool ok = true;
    for (int m = 0; m < k && ok; ++m) ok = hess[m].valid(p);
    if (!ok) continue;

    const Mat gp = g.value(p);
    const OrthonormalFrame fr = orthonormal_frame(gp);
    Mat dh(n, k);  // column m = h^m_;a
    std::vector<Mat> hm(k);
    for (int m = 0; m < k; ++m) {
      for (int a = 0; a < n; ++a) dh(a, m) = grad[m].at(p)[a];
      hm[m] = hess[m].matrix(p);
    }
    const Mat a = Mat::Identity(k, k) - dh.transpose() * gp.llt().solve(dh);
    Eigen::JacobiSVD<Mat> svd(a);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(k - 1);
    if (!(smin > 1e-12 * std::max(1.0, smax)))
      throw Error(ErrorCode::SingularCouplingMatrix, "coupling matrix is singular at point " + std::to_string(p), smin);
    out.max_condition = std::max(out.max_condition, smax / smin);
    const Mat ainv = a.inverse();

    const Mat f = gp - dh * dh.transpose();
    const Mat ff = to_frame(f, fr);
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (ff + ff.transpose()), Eigen::EigenvaluesOnly);
    out.min_f_eigenvalue = std::min(out.min_f_eigenvalue, es.eigenvalues()(0));
    if (es.eigenvalues()(0) > 0.0) {
      const Mat alt = Mat::Identity(k, k) + dh.transpose() * f.llt().solve(dh);
      out.inverse_identity_residual = std::max(out.inverse_identity_residual, (alt - ainv).norm() / ainv.norm());
    }

    Tensor4 lhs(n);
    double scale = 0.0;
    for (int m = 0; m < k; ++m)
      for (int q = 0; q < k; ++q) {
        const double w = ainv(m, q);
        if (w == 0.0) continue;
        const Mat& x = hm[m];
        const Mat& y = hm[q];
        for (int pp = 0; pp < n; ++pp)
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              for (int l = 0; l < n; ++l) lhs(pp, i, j, l) += w * (x(pp, j) * y(i, l) - x(pp, l) * y(i, j));
        scale += std::abs(w) * to_frame(hm[m], fr).norm() * to_frame(hm[q], fr).norm();
      }
    num = std::max(num, to_frame(lhs - curvature.riemann[p], fr).norm());
    den = std::max({den, curvature.norm[p], scale});
    ++out.points;
  }
  if (out.points == 0) throw Error(ErrorCode::BoundaryStencil, "no interior point carries second derivatives of every field");
  out.f_positive_definite = out.min_f_eigenvalue > 0.0;
  out.absolute = num;
  out.residual = den > 0.0 ? num / den : 0.0;
  return out;
}

}  // namespace hypersurf
