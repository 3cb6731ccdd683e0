#pragma once

#include <cstdint>
#include <vector>

#include "hypersurf/height_field.hpp"
#include "hypersurf/metric.hpp"
#include "hypersurf/tensor_field.hpp"

namespace hypersurf {

struct FlatMetric {
  MetricField f;            // g - dh dh on the valid region, with exact first derivatives
  double flatness = 0.0;        // max |R(f)| over max(curvature term scale of f, reference_scale)
  double curvature_norm = 0.0;  // max |R(f)|
  double reference_scale = 0.0;  // max |R(g)|
};

// Throws NotPositiveDefinite where the height field claims validity but
// |grad h|_g >= 1, and GridMismatch.
FlatMetric flat_metric(const MetricField& g, const HeightField& height);

struct FlatCoordinates {
  ChartGrid grid;
  std::size_t base = 0;
  std::vector<Vec> m;        // flat coordinates, m(p0) = 0
  std::vector<Mat> coframe;  // theta(i, a) = d_a m^i
  std::vector<std::uint8_t> valid;
  double flatness = 0.0;
  double closure_residual = 0.0;  // finite-difference pullback of delta against f
  double path_residual = 0.0;     // ascending vs descending sweep order

  bool is_valid(std::size_t p) const { return valid[p] != 0; }
};

struct FlatOptions {
  double flat_tol = 1e-3;
  double curvature_scale = 0.0;  // floor for the flatness denominator
  int substeps = 4;
};

// Parallel-transports the Cholesky coframe at p0 with f's connection and
// line-integrates it. Throws FlatnessViolation when f is not flat.
FlatCoordinates flat_coordinates(const MetricField& f, const GridIndex& p0, const FlatOptions& options = {});

struct ImmersionGrid {
  ChartGrid grid;
  std::vector<Vec> map;       // I = (m, h) in R^{n+1}
  std::vector<Mat> tangents;  // column a = d_a I
  std::vector<Vec> normal;
  std::vector<std::uint8_t> valid;

  double induced_residual = 0.0;      // finite-difference d I . d I against g, relative
  double second_form_residual = 0.0;  // covariant Hessian of I along the normal against Pi, relative
  double normal_orthogonality = 0.0;  // max |N . d_a I| with the stored tangents
  double normal_unit_defect = 0.0;    // max ||N| - 1|
  double gram_schmidt_discrepancy = 0.0;
  double inverse_identity_residual = 0.0;  // (1 + h f^-1 h)(1 - g^-1(h, h)) - 1
  double tangency_residual = 0.0;          // tangential part of the covariant Hessian

  bool is_valid(std::size_t p) const { return valid[p] != 0; }
  std::size_t valid_count() const;
};

// I = (m, h) with the closed-form unit normal s (-theta f^-1 grad h, 1).
// Throws GridMismatch.
ImmersionGrid assemble_immersion(const FlatCoordinates& m, const HeightField& height, const MetricField& g,
                                 const TensorField& pi);

// Recomputes the residual fields of an immersion from its map, tangents and normals.
void evaluate_immersion(ImmersionGrid& imm, const MetricField& g, const TensorField& pi);

// I -> Q I + t with tangents and normals rotated; residuals are recomputed.
void apply_rigid_motion(ImmersionGrid& imm, const Mat& rotation, const Vec& translation, const MetricField& g,
                        const TensorField& pi);

}  // namespace hypersurf
