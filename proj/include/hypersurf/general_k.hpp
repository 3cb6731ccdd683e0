#pragma once

#include <vector>

#include "hypersurf/curvature.hpp"
#include "hypersurf/metric.hpp"
#include "hypersurf/tensor_field.hpp"

namespace hypersurf {

// k scalar fields h^1..h^k on a shared grid.
struct KTupleCandidate {
  ChartGrid grid;
  std::vector<TensorField> fields;

  int k() const { return static_cast<int>(fields.size()); }
};

struct KTupleResult {
  double residual = 0.0;  // relative, see verify_k_tuple
  double absolute = 0.0;  // max |LHS - R|
  bool f_positive_definite = true;
  double min_f_eigenvalue = 0.0;  // smallest eigenvalue of f in a g-orthonormal frame
  double max_condition = 1.0;     // of the coupling matrix A
  double inverse_identity_residual = 0.0;  // A^-1 against delta + h f^-1 h
  std::size_t points = 0;
};

// Evaluates (h^m_;pj h^n_;ik - h^m_;pk h^n_;ij) (A^-1)_mn - R_pijk with
// A_mn = delta_mn - g^ab h^m_;a h^n_;b at every point where both covariant
// derivatives and the curvature exist. The relative residual divides by
// max(|R|, sum |A^-1_mn| |H^m| |H^n|), which reduces to the Gauss residual
// for k = 1. Throws SingularCouplingMatrix and GridMismatch.
KTupleResult verify_k_tuple(const MetricField& g, const KTupleCandidate& candidate);
KTupleResult verify_k_tuple(const MetricField& g, const CurvatureBundle& curvature, const KTupleCandidate& candidate);

}  // namespace hypersurf
