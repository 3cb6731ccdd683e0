#include "hypersurf/flat_immersion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hypersurf/curvature.hpp"
#include "hypersurf/detail/line_interp.hpp"
#include "hypersurf/detail/sweep.hpp"
#include "hypersurf/errors.hpp"
#include "hypersurf/frame.hpp"
#include "hypersurf/parallel.hpp"

namespace hypersurf {

FlatMetric flat_metric(const MetricField& g, const HeightField& height) {
  require_same_grid(g.grid(), height.grid, "flat_metric");
  const ChartGrid& grid = g.grid();
  const int n = grid.dim();
  const std::size_t size = grid.size();
  std::vector<Mat> values(size);
  std::vector<Tensor3> first(size, Tensor3(n));
  std::vector<std::uint8_t> mask(size, 0);

  parallel_for(size, [&](std::size_t p) {
    values[p] = g.value(p);
    if (!height.is_valid(p) || !g.jet_available(p, false)) return;
    const MetricJet j = g.jet(p, false);
    const Tensor3 gamma = christoffel(j);
    const Vec& dh = height.grad[p];
    // d_c h_a = h_;ac + Gamma^e_ac h_e
    Mat ddh(n, n);
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < n; ++c) {
        double v = height.hessian[p](a, c);
        for (int e = 0; e < n; ++e) v += gamma(e, a, c) * dh[e];
        ddh(a, c) = v;
      }
    values[p] = j.g - dh * dh.transpose();
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) first[p](a, b, c) = j.dg(a, b, c) - ddh(a, c) * dh[b] - dh[a] * ddh(b, c);
    mask[p] = 1;
  });

  FlatMetric out{MetricField::with_first_derivatives(grid, std::move(values), std::move(first), std::move(mask))};
  out.f.set_stencil_order(StencilOrder::Fourth);
  out.reference_scale = max_curvature_norm(riemann(g));
  const CurvatureBundle curv = riemann(out.f);
  out.flatness = flatness_ratio(curv, out.reference_scale);
  out.curvature_norm = max_curvature_norm(curv);
  return out;
}

namespace {

// Transported coframe and integrated coordinates, packed as [theta | m].
void transport(const MetricField& f, const detail::MetricSampler& sampler, std::size_t base,
               const std::vector<int>& order, int substeps, std::vector<Vec>& states,
               std::vector<std::uint8_t>& reached) {
  const ChartGrid& grid = f.grid();
  const int n = grid.dim();
  const Mat theta0 = orthonormal_frame(f.value(base)).coframe;
  Vec y0(n * n + n);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < n; ++a) y0[i * n + a] = theta0(i, a);
  y0.tail(n).setZero();
  states.assign(grid.size(), Vec());
  states[base] = y0;

  auto advance = [&](int axis, int dir, std::size_t from, std::size_t to, Vec& y) {
    if (!sampler.available(to)) return false;
    const std::size_t lower = std::min(from, to);
    bool ok = true;
    auto rhs = [&](double frac, const Vec& s) {
      Mat gi;
      Tensor3 gm;
      Vec dy = Vec::Zero(n * n + n);
      if (!sampler.line(lower, axis, frac, gi, gm)) {
        ok = false;
        return dy;
      }
      for (int i = 0; i < n; ++i) {
        for (int a = 0; a < n; ++a) {
          double v = 0.0;
          for (int c = 0; c < n; ++c) v += gm(c, a, axis) * s[i * n + c];
          dy[i * n + a] = v;
        }
        dy[n * n + i] = s[i * n + axis];
      }
      return dy;
    };
    const Vec next = detail::rk4_cell(y, dir, grid.spacing()[axis], substeps, rhs);
    if (!ok || !next.allFinite()) return false;
    y = next;
    return true;
  };
  detail::sweep(grid, base, order, states, reached, advance);
}

}  // namespace

FlatCoordinates flat_coordinates(const MetricField& f, const GridIndex& p0, const FlatOptions& options) {
  const ChartGrid& grid = f.grid();
  const int n = grid.dim();
  if (!grid.contains(p0)) throw Error(ErrorCode::InvalidSeed, "base point outside the grid");
  const std::size_t base = grid.linear(p0);

  FlatCoordinates out;
  out.grid = grid;
  out.base = base;
  out.flatness = flatness_ratio(riemann(f), options.curvature_scale);
  if (out.flatness > options.flat_tol)
    throw Error(ErrorCode::FlatnessViolation, "metric is not flat (relative curvature " + std::to_string(out.flatness) + ")",
                out.flatness);

  const detail::MetricSampler sampler(f);
  if (!sampler.available(base)) throw Error(ErrorCode::InvalidSeed, "connection undefined at the base point");

  std::vector<int> fwd(n);
  std::iota(fwd.begin(), fwd.end(), 0);
  const std::vector<int> rev(fwd.rbegin(), fwd.rend());

  std::vector<Vec> states;
  transport(f, sampler, base, fwd, options.substeps, states, out.valid);
  out.m.assign(grid.size(), Vec());
  out.coframe.assign(grid.size(), Mat());
  detail::NodeTable mt(grid, n);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    if (!out.valid[p]) continue;
    out.m[p] = states[p].tail(n);
    Mat th(n, n);
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < n; ++a) th(i, a) = states[p][i * n + a];
    out.coframe[p] = th;
    std::copy(out.m[p].data(), out.m[p].data() + n, mt.at(p));
    mt.valid[p] = 1;
  }

  double closure = 0.0;
  std::vector<double> d(n);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    if (!out.valid[p]) continue;
    Mat jac(n, n);
    bool ok = true;
    for (int a = 0; a < n && ok; ++a) {
      ok = detail::nodal_derivative(mt, p, a, d.data());
      for (int i = 0; i < n && ok; ++i) jac(i, a) = d[i];
    }
    if (!ok) continue;
    const OrthonormalFrame fr = orthonormal_frame(f.value(p));
    closure = std::max(closure, to_frame(Mat(jac.transpose() * jac - f.value(p)), fr).norm());
  }
  out.closure_residual = closure / std::sqrt(static_cast<double>(n));

  std::vector<Vec> other;
  std::vector<std::uint8_t> reached;
  transport(f, sampler, base, rev, options.substeps, other, reached);
  double diff = 0.0, scale = 0.0;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    if (!out.valid[p] || !reached[p]) continue;
    diff = std::max(diff, (out.m[p] - other[p].tail(n)).norm());
    scale = std::max(scale, out.m[p].norm());
  }
  out.path_residual = scale > 0.0 ? diff / scale : diff;
  return out;
}

std::size_t ImmersionGrid::valid_count() const {
  return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), std::uint8_t{1}));
}

ImmersionGrid assemble_immersion(const FlatCoordinates& m, const HeightField& height, const MetricField& g,
                                 const TensorField& pi) {
  require_same_grid(m.grid, height.grid, "assemble_immersion");
  require_same_grid(m.grid, g.grid(), "assemble_immersion");
  require_same_grid(m.grid, pi.grid(), "assemble_immersion");
  const ChartGrid& grid = g.grid();
  const int n = grid.dim();
  const std::size_t size = grid.size();

  ImmersionGrid imm;
  imm.grid = grid;
  imm.map.assign(size, Vec());
  imm.tangents.assign(size, Mat());
  imm.normal.assign(size, Vec());
  imm.valid.assign(size, 0);

  std::vector<double> inverse_identity(size, 0.0), gram_schmidt(size, 0.0);
  parallel_for(size, [&](std::size_t p) {
    if (!m.is_valid(p) || !height.is_valid(p)) return;
    const Vec& dh = height.grad[p];
    const Mat gp = g.value(p);
    const Mat fp = gp - dh * dh.transpose();
    const Vec finv_dh = fp.llt().solve(dh);
    const double gn = dh.dot(gp.llt().solve(dh));
    // pullback of the Euclidean metric by m, which equals f up to integration error
    const Mat pulled = m.coframe[p].transpose() * m.coframe[p];
    const Vec pinv_dh = pulled.llt().solve(dh);
    const double s = 1.0 / std::sqrt(1.0 + dh.dot(pinv_dh));

    Vec x(n + 1);
    x.head(n) = m.m[p];
    x[n] = height.h[p];
    Mat t(n + 1, n);
    t.topRows(n) = m.coframe[p];
    t.row(n) = dh.transpose();
    Vec nv(n + 1);
    nv.head(n) = -s * (m.coframe[p] * pinv_dh);
    nv[n] = s;

    inverse_identity[p] = std::abs((1.0 + dh.dot(finv_dh)) * (1.0 - gn) - 1.0);
    Eigen::HouseholderQR<Mat> qr(t);
    Vec ngs = Mat(qr.householderQ()).col(n);
    if (ngs.dot(nv) < 0.0) ngs = -ngs;
    gram_schmidt[p] = (ngs - nv).norm();

    imm.map[p] = x;
    imm.tangents[p] = t;
    imm.normal[p] = nv;
    imm.valid[p] = 1;
  });
  for (std::size_t p = 0; p < size; ++p) {
    imm.inverse_identity_residual = std::max(imm.inverse_identity_residual, inverse_identity[p]);
    imm.gram_schmidt_discrepancy = std::max(imm.gram_schmidt_discrepancy, gram_schmidt[p]);
  }
  evaluate_immersion(imm, g, pi);
  return imm;
}

void evaluate_immersion(ImmersionGrid& imm, const MetricField& g, const TensorField& pi) {
  require_same_grid(imm.grid, g.grid(), "evaluate_immersion");
  require_same_grid(imm.grid, pi.grid(), "evaluate_immersion");
  const ChartGrid& grid = imm.grid;
  const int n = grid.dim();
  const std::size_t size = grid.size();

  detail::NodeTable xt(grid, n + 1), tt(grid, (n + 1) * n);
  for (std::size_t p = 0; p < size; ++p) {
    if (!imm.is_valid(p)) continue;
    std::copy(imm.map[p].data(), imm.map[p].data() + n + 1, xt.at(p));
    std::copy(imm.tangents[p].data(), imm.tangents[p].data() + (n + 1) * n, tt.at(p));  // column-major
    xt.valid[p] = tt.valid[p] = 1;
  }

  std::vector<double> induced(size, 0.0), second(size, 0.0), pin(size, 0.0), tangency(size, 0.0), orth(size, 0.0),
      unit(size, 0.0);
  const std::vector<Slot> s3(3, Slot::Lower);
  parallel_for(size, [&](std::size_t p) {
    if (!imm.is_valid(p)) return;
    const OrthonormalFrame fr = orthonormal_frame(g.value(p));
    const Vec& nv = imm.normal[p];
    const Mat& t = imm.tangents[p];
    unit[p] = std::abs(nv.norm() - 1.0);
    orth[p] = (nv.transpose() * t * fr.frame).cwiseAbs().maxCoeff();

    std::vector<double> d((n + 1) * n);
    Mat jac(n + 1, n);
    bool ok = true;
    for (int a = 0; a < n && ok; ++a) {
      ok = detail::nodal_derivative(xt, p, a, d.data());
      for (int i = 0; i <= n && ok; ++i) jac(i, a) = d[i];
    }
    if (ok) induced[p] = to_frame(Mat(jac.transpose() * jac - g.value(p)), fr).norm();

    if (!pi.valid(p) || !g.jet_available(p, false)) return;
    std::vector<Mat> dt(n);
    for (int b = 0; b < n; ++b) {
      if (!detail::nodal_derivative(tt, p, b, d.data())) return;
      dt[b] = Eigen::Map<const Mat>(d.data(), n + 1, n);
    }
    const Tensor3 gamma = christoffel(g, p);
    Mat form(n, n);
    std::vector<double> tang(n * n * n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        Vec hess = dt[b].col(a);
        for (int c = 0; c < n; ++c) hess -= gamma(c, a, b) * t.col(c);
        form(a, b) = hess.dot(nv);
        for (int c = 0; c < n; ++c) tang[(a * n + b) * n + c] = hess.dot(t.col(c));
      }
    const Mat pp = pi.matrix(p);
    second[p] = to_frame(Mat(form - pp), fr).norm();
    pin[p] = to_frame(pp, fr).norm();
    tangency[p] = metric_norm(tang, s3, fr);
  });

  auto mx = [](const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); };
  const double pscale = mx(pin);
  imm.induced_residual = mx(induced) / std::sqrt(static_cast<double>(n));
  imm.second_form_residual = pscale > 0.0 ? mx(second) / pscale : mx(second);
  imm.tangency_residual = pscale > 0.0 ? mx(tangency) / pscale : mx(tangency);
  imm.normal_orthogonality = mx(orth);
  imm.normal_unit_defect = mx(unit);
}

void apply_rigid_motion(ImmersionGrid& imm, const Mat& rotation, const Vec& translation, const MetricField& g,
                        const TensorField& pi) {
  for (std::size_t p = 0; p < imm.grid.size(); ++p) {
    if (!imm.is_valid(p)) continue;
    imm.map[p] = rotation * imm.map[p] + translation;
    imm.tangents[p] = rotation * imm.tangents[p];
    imm.normal[p] = rotation * imm.normal[p];
  }
  evaluate_immersion(imm, g, pi);
}

}  // namespace hypersurf
