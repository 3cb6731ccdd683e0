#pragma once

#include <span>
#include <vector>

#include "hypersurf/grid.hpp"
#include "hypersurf/tensor.hpp"
#include "hypersurf/tensor_field.hpp"

namespace hypersurf {

// g-orthonormal frame built from the lower Cholesky factor g = L L^T.
//   frame(a, i)   = E^a_i     (columns are the frame vectors)
//   coframe(i, a) = theta^i_a (the inverse of `frame`, equal to L^T)
struct OrthonormalFrame {
  Mat frame;
  Mat coframe;
};

// Throws NotPositiveDefinite.
OrthonormalFrame orthonormal_frame(const Mat& g);

// Covariant tensor components in the frame: T(E_i, E_j, ...).
Mat to_frame(const Mat& covariant, const OrthonormalFrame& f);
Tensor4 to_frame(const Tensor4& covariant, const OrthonormalFrame& f);

// Inverse of to_frame for rank 2: Pi_ab = theta^i_a theta^j_b Pihat_ij.
Mat from_frame(const Mat& frame_components, const OrthonormalFrame& f);
Tensor4 from_frame(const Tensor4& frame_components, const OrthonormalFrame& f);

// Metric norm of a tensor with arbitrary slot kinds, i.e. the Frobenius norm
// of its orthonormal-frame components.
double metric_norm(std::span<const double> components, const std::vector<Slot>& slots,
                   const OrthonormalFrame& f);

}  // namespace hypersurf
