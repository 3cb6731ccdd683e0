#pragma once

#include <optional>

#include "hypersurf/curvature.hpp"
#include "hypersurf/height_field.hpp"
#include "hypersurf/metric.hpp"

namespace hypersurf {

struct CrossSectionResult {
  double level = 0.0;
  double residual = 0.0;  // worst per-point relative defect over the band
  std::size_t band_points = 0;
  std::size_t skipped_degenerate = 0;
  double min_scaling = 0.0;  // 1 / |grad h|^2
  double max_scaling = 0.0;
  double max_projector_defect = 0.0;  // |P^2 - P| + |P n| + |tr P - (n - 1)|
};

// At each valid point with |h - level| below the band tolerance (default: half
// of max_i |d_i h| spacing_i at that point) the level set's curvature
// R_N = P(R) + K ^ K with K = P(h_;ab) / |grad h| is compared with
// P(R) / |grad h|^2. Points with |grad h|_g <= 1e-3 are skipped.
// Throws EmptyLevelBand, or DegenerateGradient when every band point is degenerate.
CrossSectionResult cross_section_check(const MetricField& g, const CurvatureBundle& curvature,
                                       const HeightField& height, double level,
                                       std::optional<double> band_tolerance = {});

}  // namespace hypersurf
