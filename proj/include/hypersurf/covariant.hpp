#pragma once

#include "hypersurf/metric.hpp"
#include "hypersurf/tensor_field.hpp"

namespace hypersurf {

// Levi-Civita derivative of `field`, with the new covariant slot appended
// last: out(..., c) = T_{...;c}. Partial derivatives use central differences
// of the metric's stencil order; a point is valid when the whole stencil is.
// Throws GridMismatch.
TensorField covariant_derivative(const MetricField& metric, const TensorField& field);

}  // namespace hypersurf
