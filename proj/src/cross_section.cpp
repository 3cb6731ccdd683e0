#include "hypersurf/cross_section.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hypersurf/curvature_operator.hpp"
#include "hypersurf/errors.hpp"
#include "hypersurf/frame.hpp"

namespace hypersurf {

namespace {

// T'_abcd = P^i_a P^j_b P^k_c P^l_d T_ijkl
Tensor4 project(const Tensor4& t, const Mat& proj) {
  const int n = t.dim();
  Tensor4 out = t;
  for (int slot = 0; slot < 4; ++slot) {
    Tensor4 next(n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            int idx[4] = {a, b, c, d};
            const int keep = idx[slot];
            double s = 0.0;
            for (int i = 0; i < n; ++i) {
              idx[slot] = i;
              s += proj(i, keep) * out(idx[0], idx[1], idx[2], idx[3]);
            }
            next(a, b, c, d) = s;
          }
    out = std::move(next);
  }
  return out;
}

}  // namespace

CrossSectionResult cross_section_check(const MetricField& g, const CurvatureBundle& curvature,
                                       const HeightField& height, double level, std::optional<double> band_tolerance) {
  require_same_grid(g.grid(), curvature.grid, "cross_section_check");
  require_same_grid(g.grid(), height.grid, "cross_section_check");
  const ChartGrid& grid = g.grid();
  const int n = grid.dim();

  CrossSectionResult out;
  out.level = level;
  out.min_scaling = std::numeric_limits<double>::infinity();
  std::size_t in_band = 0;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    if (!height.is_valid(p) || !curvature.is_valid(p)) continue;
    const Vec& dh = height.grad[p];
    double tol = 0.0;
    if (band_tolerance) {
      tol = *band_tolerance;
    } else {
      for (int a = 0; a < n; ++a) tol = std::max(tol, 0.5 * std::abs(dh[a]) * grid.spacing()[a]);
    }
    if (!(std::abs(height.h[p] - level) < tol)) continue;
    ++in_band;

    const Mat gp = g.value(p);
    const Vec up = gp.llt().solve(dh);  // g^ab h_b
    const double gn = dh.dot(up);
    const double norm = std::sqrt(gn);
    if (!(norm > 1e-3)) {
      ++out.skipped_degenerate;
      continue;
    }
    // proj(i, a) = P^i_a = delta^i_a - n^i n_a
    const Mat proj = Mat::Identity(n, n) - (up / norm) * (dh / norm).transpose();
    const double defect = (proj * proj - proj).norm() + (proj * (up / norm)).norm() + std::abs(proj.trace() - (n - 1));
    out.max_projector_defect = std::max(out.max_projector_defect, defect);

    const Tensor4 rm = project(curvature.riemann[p], proj);
    const Mat k = proj.transpose() * height.hessian[p] * proj / norm;
    const Tensor4 kk = wedge_square(k);
    const Tensor4 rn = rm + kk;
    const Tensor4 scaled = (1.0 / gn) * rm;

    const OrthonormalFrame fr = orthonormal_frame(gp);
    const double den = std::max({to_frame(scaled, fr).norm(), to_frame(kk, fr).norm(), to_frame(rm, fr).norm()});
    const double num = to_frame(rn - scaled, fr).norm();
    out.residual = std::max(out.residual, den > 0.0 ? num / den : 0.0);
    out.min_scaling = std::min(out.min_scaling, 1.0 / gn);
    out.max_scaling = std::max(out.max_scaling, 1.0 / gn);
    ++out.band_points;
  }
  if (in_band == 0) throw Error(ErrorCode::EmptyLevelBand, "no valid point lies on the level set", level);
  if (out.band_points == 0)
    throw Error(ErrorCode::DegenerateGradient, "the gradient of h vanishes on the whole level band", level);
  return out;
}

}  // namespace hypersurf
