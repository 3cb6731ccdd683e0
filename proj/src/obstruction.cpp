#include "hypersurf/obstruction.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "hypersurf/covariant.hpp"
#include "hypersurf/errors.hpp"
#include "hypersurf/parallel.hpp"

namespace hypersurf {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Immersible: return "Immersible";
    case Verdict::FlatCase: return "FlatCase";
    case Verdict::NotPositiveOperator: return "NotPositiveOperator";
    case Verdict::WeylObstruction: return "WeylObstruction";
    case Verdict::CodazziObstruction: return "CodazziObstruction";
    case Verdict::SurfaceCase: return "SurfaceCase";
  }
  return "Unknown";
}

PiRecovery try_recover_pi(const Tensor4& riemann, const OrthonormalFrame& frame, double positivity) {
  const int n = riemann.dim();
  const Tensor4 rf = to_frame(riemann, frame);
  PiRecovery out;

  if (n == 2) {
    const double k = rf(0, 1, 0, 1);
    out.min_eigenvalue = k > 0.0 ? 1.0 : (k < 0.0 ? -1.0 : 0.0);
    out.positive = k > 0.0;
    out.conditioning = 1.0;
    out.pi_frame = Mat::Zero(2, 2);
    if (k > 0.0) {
      out.pi_frame = std::sqrt(k) * Mat::Identity(2, 2);
    } else if (k < 0.0) {
      out.pi_frame(0, 0) = std::sqrt(-k);
      out.pi_frame(1, 1) = -std::sqrt(-k);
    }
    out.pi = from_frame(out.pi_frame, frame);
    return out;
  }
  if (n < 2) throw Error(ErrorCode::UnsupportedDimension, "curvature needs n >= 2", n);

  const CurvatureOperator op = to_operator(rf);
  const double top = op.max_abs_eigenvalue();
  out.min_eigenvalue = top > 0.0 ? op.min_eigenvalue() / top : 0.0;
  out.positive = op.positive(positivity);
  if (!out.positive) {
    out.conditioning = std::numeric_limits<double>::infinity();
    return out;
  }
  out.conditioning = op.eigenvalues[op.eigenvalues.size() - 1] / op.min_eigenvalue();
  const CurvatureOperator lg = operator_log(op, positivity);
  const RStarDecomposition dec = decompose(unpack(lg.matrix, n));
  out.weyl_star_norm = dec.weyl_star.norm();
  out.pi_frame = symmetric_exp(dec.schouten_star);
  out.pi = from_frame(out.pi_frame, frame);
  return out;
}

PiRecovery recover_pi(const Tensor4& riemann, const OrthonormalFrame& frame, double weyl_tol, double positivity) {
  PiRecovery r = try_recover_pi(riemann, frame, positivity);
  if (!r.positive && riemann.dim() > 2)
    throw Error(ErrorCode::NotPositiveOperator, "curvature operator is not positive definite", r.min_eigenvalue);
  if (r.weyl_star_norm > weyl_tol)
    throw Error(ErrorCode::WeylObstruction, "Weyl component of ln R does not vanish", r.weyl_star_norm);
  return r;
}

double gauss_defect(const Mat& pi, const Tensor4& riemann, const OrthonormalFrame& frame) {
  return to_frame(wedge_square(pi) - riemann, frame).norm();
}

Residual gauss_residual(const TensorField& pi, const CurvatureBundle& curvature, const MetricField& metric) {
  require_same_grid(pi.grid(), curvature.grid, "gauss_residual");
  require_same_grid(pi.grid(), metric.grid(), "gauss_residual");
  const std::size_t size = pi.grid().size();
  std::vector<double> num(size, 0.0), den(size, 0.0);
  parallel_for(size, [&](std::size_t p) {
    if (!pi.valid(p) || !curvature.is_valid(p)) return;
    const OrthonormalFrame f = orthonormal_frame(metric.value(p));
    const Mat pf = to_frame(pi.matrix(p), f);
    num[p] = gauss_defect(pi.matrix(p), curvature.riemann[p], f);
    den[p] = std::max(curvature.norm[p], pf.squaredNorm());
  });
  Residual r;
  const double d = *std::max_element(den.begin(), den.end());
  r.absolute = *std::max_element(num.begin(), num.end());
  r.relative = d > 0.0 ? r.absolute / d : 0.0;
  return r;
}

TensorField codazzi_tensor(const TensorField& pi, const MetricField& metric) {
  const TensorField dpi = covariant_derivative(metric, pi);
  const int n = pi.grid().dim();
  TensorField y = TensorField::covariant(pi.grid(), 3);
  for (std::size_t p = 0; p < pi.grid().size(); ++p) {
    if (!dpi.valid(p)) continue;
    const auto d = dpi.at(p);
    auto o = y.at(p);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) o[(a * n + b) * n + c] = 0.5 * (d[(a * n + b) * n + c] - d[(a * n + c) * n + b]);
    y.set_valid(p, true);
  }
  return y;
}

namespace {

Residual codazzi_from_derivative(const TensorField& pi, const TensorField& dpi, const MetricField& metric) {
  const int n = pi.grid().dim();
  const std::vector<Slot> s2(2, Slot::Lower), s3(3, Slot::Lower);
  const std::size_t size = pi.grid().size();
  std::vector<double> num(size, 0.0), den(size, 0.0);
  parallel_for(size, [&](std::size_t p) {
    if (!dpi.valid(p)) return;
    const OrthonormalFrame f = orthonormal_frame(metric.value(p));
    const auto d = dpi.at(p);
    std::vector<double> y(d.size());
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) y[(a * n + b) * n + c] = 0.5 * (d[(a * n + b) * n + c] - d[(a * n + c) * n + b]);
    num[p] = metric_norm(y, s3, f);
    den[p] = metric_norm(d, s3, f) + metric_norm(pi.at(p), s2, f);
  });
  Residual r;
  const double d = *std::max_element(den.begin(), den.end());
  r.absolute = *std::max_element(num.begin(), num.end());
  r.relative = d > 0.0 ? r.absolute / d : 0.0;
  return r;
}

}  // namespace

Residual codazzi_residual(const TensorField& pi, const MetricField& metric) {
  require_same_grid(pi.grid(), metric.grid(), "codazzi_residual");
  return codazzi_from_derivative(pi, covariant_derivative(metric, pi), metric);
}

ObstructionReport analyze(const MetricField& metric, const Tolerances& tol) {
  const auto t0 = Clock::now();
  const CurvatureBundle curvature = riemann(metric);
  const double elapsed = seconds_since(t0);
  ObstructionReport r = analyze(metric, curvature, tol);
  r.timings.insert(r.timings.begin(), {"curvature", elapsed});
  return r;
}

ObstructionReport analyze(const MetricField& metric, const CurvatureBundle& curvature, const Tolerances& tol) {
  require_same_grid(metric.grid(), curvature.grid, "analyze");
  const ChartGrid& grid = metric.grid();
  const int n = grid.dim();
  const std::size_t size = grid.size();

  ObstructionReport r;
  r.dim = n;
  r.grid = grid;
  r.tolerances = tol;
  r.curvature_points = curvature.valid_count();
  r.flatness = flatness_ratio(curvature);

  TensorField pi = TensorField::covariant(grid, 2);
  pi.declare_symmetric();

  if (r.flatness <= tol.flat) {
    for (std::size_t p = 0; p < size; ++p) pi.set_valid(p, curvature.is_valid(p));
    r.verdict = Verdict::FlatCase;
    r.gauss_residual = r.flatness;
    r.gauss_absolute = *std::max_element(curvature.norm.begin(), curvature.norm.end());
    r.pi_unique_up_to_sign = false;
    r.pi_field = std::move(pi);
    return r;
  }

  auto t0 = Clock::now();
  std::vector<PiRecovery> rec(size);
  parallel_for(size, [&](std::size_t p) {
    if (!curvature.is_valid(p)) return;
    rec[p] = try_recover_pi(curvature.riemann[p], orthonormal_frame(metric.value(p)), tol.positivity);
  });
  bool all_positive = true;
  r.min_operator_eigenvalue = std::numeric_limits<double>::infinity();
  r.conditioning = 1.0;
  for (std::size_t p = 0; p < size; ++p) {
    if (!curvature.is_valid(p)) continue;
    all_positive = all_positive && rec[p].positive;
    r.min_operator_eigenvalue = std::min(r.min_operator_eigenvalue, rec[p].min_eigenvalue);
    r.conditioning = std::max(r.conditioning, rec[p].conditioning);
    r.weyl_star_norm = std::max(r.weyl_star_norm, rec[p].weyl_star_norm);
  }
  if (r.curvature_points == 0) r.min_operator_eigenvalue = 0.0;
  r.timings.emplace_back("recovery", seconds_since(t0));

  if (n > 2 && !all_positive) {
    r.verdict = Verdict::NotPositiveOperator;
    return r;
  }

  for (std::size_t p = 0; p < size; ++p) {
    if (!curvature.is_valid(p)) continue;
    pi.set_matrix(p, rec[p].pi);
    pi.set_valid(p, true);
  }

  t0 = Clock::now();
  const Residual g = gauss_residual(pi, curvature, metric);
  r.gauss_residual = g.relative;
  r.gauss_absolute = g.absolute;
  const TensorField dpi = covariant_derivative(metric, pi);
  r.codazzi_points = dpi.valid_count();
  if (r.codazzi_points > 0) {
    const Residual c = codazzi_from_derivative(pi, dpi, metric);
    r.codazzi_residual = c.relative;
    r.codazzi_absolute = c.absolute;
  } else {
    // Nothing to difference: Codazzi cannot be confirmed.
    r.codazzi_residual = 1.0;
    r.codazzi_absolute = 0.0;
  }
  r.timings.emplace_back("residuals", seconds_since(t0));

  if (n == 2) {
    r.verdict = Verdict::SurfaceCase;
    r.pi_unique_up_to_sign = false;
  } else if (r.weyl_star_norm > tol.weyl || r.gauss_residual > tol.gauss) {
    r.verdict = Verdict::WeylObstruction;
  } else if (r.codazzi_residual > tol.codazzi) {
    r.verdict = Verdict::CodazziObstruction;
  } else {
    r.verdict = Verdict::Immersible;
  }
  r.pi_field = std::move(pi);
  return r;
}

int exit_code(const ObstructionReport& report) {
  switch (report.verdict) {
    case Verdict::Immersible:
    case Verdict::FlatCase: return 0;
    default: return 2;
  }
}

}  // namespace hypersurf
