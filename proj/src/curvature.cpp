#include "hypersurf/curvature.hpp"

#include <algorithm>
#include <cmath>

#include "hypersurf/errors.hpp"
#include "hypersurf/frame.hpp"
#include "hypersurf/parallel.hpp"

namespace hypersurf {

Tensor3 christoffel(const MetricJet& jet) {
  const int n = static_cast<int>(jet.g.rows());
  // Gamma_dbc = 1/2 (d_b g_dc + d_c g_db - d_d g_bc)
  Tensor3 lower(n);
  for (int d = 0; d < n; ++d)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        lower(d, b, c) = 0.5 * (jet.dg(d, c, b) + jet.dg(d, b, c) - jet.dg(b, c, d));
  Tensor3 gamma(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        double s = 0.0;
        for (int d = 0; d < n; ++d) s += jet.ginv(a, d) * lower(d, b, c);
        gamma(a, b, c) = s;
      }
  return gamma;
}

Tensor3 christoffel(const MetricField& metric, std::size_t point) {
  return christoffel(metric.jet(point, false));
}

PointCurvature curvature_from_jet(const MetricJet& jet) {
  if (!jet.ddg) throw Error(ErrorCode::BoundaryStencil, "curvature needs second derivatives");
  const int n = static_cast<int>(jet.g.rows());
  const Tensor4& dd = *jet.ddg;
  PointCurvature pc;
  pc.gamma = christoffel(jet);

  // Gamma with the upper index lowered: low(e, b, c) = g_ef Gamma^f_bc
  Tensor3 low(n);
  for (int e = 0; e < n; ++e)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        double s = 0.0;
        for (int f = 0; f < n; ++f) s += jet.g(e, f) * pc.gamma(f, b, c);
        low(e, b, c) = s;
      }

  Tensor4 second(n);
  Tensor4 quadratic(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          second(a, b, c, d) =
              0.5 * (dd(a, d, b, c) + dd(b, c, a, d) - dd(b, d, a, c) - dd(a, c, b, d));
          double q = 0.0;
          for (int e = 0; e < n; ++e) q += low(e, b, c) * pc.gamma(e, a, d) - low(e, b, d) * pc.gamma(e, a, c);
          quadratic(a, b, c, d) = q;
        }
  pc.riemann = second + quadratic;

  pc.ricci = Mat::Zero(n, n);
  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d) {
      double s = 0.0;
      for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c) s += jet.ginv(a, c) * pc.riemann(a, b, c, d);
      pc.ricci(b, d) = s;
    }
  pc.scalar = (jet.ginv.cwiseProduct(pc.ricci)).sum();

  const OrthonormalFrame f = orthonormal_frame(jet.g);
  pc.norm = to_frame(pc.riemann, f).norm();
  pc.term_scale = to_frame(second, f).norm() + to_frame(quadratic, f).norm();
  return pc;
}

std::size_t CurvatureBundle::valid_count() const {
  return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), std::uint8_t{1}));
}

CurvatureBundle riemann(const MetricField& metric) {
  const ChartGrid& grid = metric.grid();
  const std::size_t size = grid.size();
  CurvatureBundle b;
  b.grid = grid;
  b.valid.assign(size, 0);
  b.gamma.assign(size, Tensor3());
  b.riemann.assign(size, Tensor4());
  b.ricci.assign(size, Mat());
  b.scalar.assign(size, 0.0);
  b.norm.assign(size, 0.0);
  b.term_scale.assign(size, 0.0);
  parallel_for(size, [&](std::size_t p) {
    if (!metric.jet_available(p, true)) return;
    PointCurvature pc = curvature_from_jet(metric.jet(p, true));
    b.gamma[p] = std::move(pc.gamma);
    b.riemann[p] = std::move(pc.riemann);
    b.ricci[p] = std::move(pc.ricci);
    b.scalar[p] = pc.scalar;
    b.norm[p] = pc.norm;
    b.term_scale[p] = pc.term_scale;
    b.valid[p] = 1;
  });
  return b;
}

double flatness_ratio(const CurvatureBundle& bundle, double floor) {
  double num = 0.0;
  double den = floor;
  for (std::size_t p = 0; p < bundle.valid.size(); ++p) {
    if (!bundle.is_valid(p)) continue;
    num = std::max(num, bundle.norm[p]);
    den = std::max(den, bundle.term_scale[p]);
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : 1.0;
  return num / den;
}

double max_curvature_norm(const CurvatureBundle& bundle) {
  double m = 0.0;
  for (std::size_t p = 0; p < bundle.valid.size(); ++p)
    if (bundle.is_valid(p)) m = std::max(m, bundle.norm[p]);
  return m;
}

SymmetryDefects symmetry_defects(const Tensor4& r) {
  const int n = r.dim();
  SymmetryDefects s;
  double scale = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          const double v = r(a, b, c, d);
          scale = std::max(scale, std::abs(v));
          s.first_pair = std::max(s.first_pair, std::abs(v + r(b, a, c, d)));
          s.second_pair = std::max(s.second_pair, std::abs(v + r(a, b, d, c)));
          s.exchange = std::max(s.exchange, std::abs(v - r(c, d, a, b)));
          s.bianchi = std::max(s.bianchi, std::abs(v + r(a, c, d, b) + r(a, d, b, c)));
        }
  if (scale > 0.0) {
    s.first_pair /= scale;
    s.second_pair /= scale;
    s.exchange /= scale;
    s.bianchi /= scale;
  }
  return s;
}

SymmetryDefects symmetry_defects(const CurvatureBundle& bundle) {
  SymmetryDefects worst;
  double scale = 0.0;
  for (std::size_t p = 0; p < bundle.valid.size(); ++p) {
    if (!bundle.is_valid(p)) continue;
    const Tensor4& r = bundle.riemann[p];
    double m = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) m = std::max(m, std::abs(r.data()[i]));
    scale = std::max(scale, m);
  }
  for (std::size_t p = 0; p < bundle.valid.size(); ++p) {
    if (!bundle.is_valid(p)) continue;
    const Tensor4& r = bundle.riemann[p];
    const int n = r.dim();
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            const double v = r(a, b, c, d);
            worst.first_pair = std::max(worst.first_pair, std::abs(v + r(b, a, c, d)));
            worst.second_pair = std::max(worst.second_pair, std::abs(v + r(a, b, d, c)));
            worst.exchange = std::max(worst.exchange, std::abs(v - r(c, d, a, b)));
            worst.bianchi = std::max(worst.bianchi, std::abs(v + r(a, c, d, b) + r(a, d, b, c)));
          }
  }
  if (scale > 0.0) {
    worst.first_pair /= scale;
    worst.second_pair /= scale;
    worst.exchange /= scale;
    worst.bianchi /= scale;
  }
  return worst;
}

}  // namespace hypersurf
