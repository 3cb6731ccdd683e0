#pragma once

#include <cstdint>
#include <vector>

#include "hypersurf/grid.hpp"
#include "hypersurf/metric.hpp"
#include "hypersurf/tensor.hpp"

namespace hypersurf {

// gamma(a, b, c) = Gamma^a_bc
Tensor3 christoffel(const MetricJet& jet);
// Throws BoundaryStencil where no first-derivative stencil is available.
Tensor3 christoffel(const MetricField& metric, std::size_t point);

struct PointCurvature {
  Tensor3 gamma;
  Tensor4 riemann;  // R_abcd, sphere has R_1212 > 0
  Mat ricci;        // R_bd = g^ac R_abcd
  double scalar = 0.0;
  double norm = 0.0;        // metric norm of R
  double term_scale = 0.0;  // metric norm of the second-derivative part plus that of the quadratic part
};

PointCurvature curvature_from_jet(const MetricJet& jet);

struct CurvatureBundle {
  ChartGrid grid;
  std::vector<std::uint8_t> valid;
  std::vector<Tensor3> gamma;
  std::vector<Tensor4> riemann;
  std::vector<Mat> ricci;
  std::vector<double> scalar;
  std::vector<double> norm;
  std::vector<double> term_scale;

  bool is_valid(std::size_t p) const { return valid[p] != 0; }
  std::size_t valid_count() const;
};

// Evaluated on every point whose second-derivative stencil is available.
CurvatureBundle riemann(const MetricField& metric);

// max |R| / max(term_scale, floor) over valid points; 0 when both vanish.
double flatness_ratio(const CurvatureBundle& bundle, double floor = 0.0);
// max |R| over valid points.
double max_curvature_norm(const CurvatureBundle& bundle);

// Worst violations of the algebraic curvature identities, each relative to the
// largest |R| (plain component norms).
struct SymmetryDefects {
  double first_pair = 0.0;   // R_abcd + R_bacd
  double second_pair = 0.0;  // R_abcd + R_abdc
  double exchange = 0.0;     // R_abcd - R_cdab
  double bianchi = 0.0;      // R_abcd + R_acdb + R_adbc
};

SymmetryDefects symmetry_defects(const Tensor4& r);
SymmetryDefects symmetry_defects(const CurvatureBundle& bundle);

}  // namespace hypersurf
