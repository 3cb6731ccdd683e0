#pragma once

#include <utility>
#include <vector>

#include "hypersurf/frame.hpp"
#include "hypersurf/grid.hpp"
#include "hypersurf/tensor.hpp"

namespace hypersurf {

// Index pairs (i, j), i < j, in lexicographic order.
class TwoFormBasis {
 public:
  TwoFormBasis() = default;
  explicit TwoFormBasis(int n);

  int dim() const { return n_; }
  int size() const { return static_cast<int>(pairs_.size()); }
  const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }
  const std::pair<int, int>& pair(int k) const { return pairs_[k]; }
  // Position of (i, j) with i < j.
  int index(int i, int j) const;

 private:
  int n_ = 0;
  std::vector<std::pair<int, int>> pairs_;
};

// A curvature-like tensor seen as a symmetric map on 2-forms. Entry
// ((i,j),(k,l)) is the frame component R_ijkl; eigenvalues are ascending.
struct CurvatureOperator {
  TwoFormBasis basis;
  Mat matrix;
  Vec eigenvalues;
  Mat eigenvectors;

  double min_eigenvalue() const { return eigenvalues.size() ? eigenvalues[0] : 0.0; }
  double max_abs_eigenvalue() const;
  // min eigenvalue > rel_eps * max |eigenvalue|
  bool positive(double rel_eps = 1e-9) const;
};

CurvatureOperator make_operator(const Mat& symmetric_matrix);

// Frame components (i<j, k<l) as a matrix, and back to a full 4-index tensor
// with the pair antisymmetries filled in.
Mat pack(const Tensor4& frame_tensor);
Tensor4 unpack(const Mat& matrix, int n);

CurvatureOperator to_operator(const Tensor4& frame_tensor);
CurvatureOperator to_operator(const Tensor4& covariant, const OrthonormalFrame& frame);

// Spectral logarithm. Throws NotPositiveOperator (value = min eigenvalue)
// unless min eigenvalue > rel_eps * max |eigenvalue|.
CurvatureOperator operator_log(const CurvatureOperator& op, double rel_eps = 1e-9);
CurvatureOperator operator_exp(const CurvatureOperator& op);

// Spectral exp of a symmetric matrix.
Mat symmetric_exp(const Mat& m);

// KN(h, k)_abcd = h_ac k_bd + h_bd k_ac - h_ad k_bc - h_bc k_ad
Tensor4 kulkarni_nomizu(const Mat& h, const Mat& k);
// (Pi ^ Pi)_abcd = Pi_ac Pi_bd - Pi_ad Pi_bc
Tensor4 wedge_square(const Mat& pi);

// Split of a 4-index frame tensor by the Ricci/Schouten/Weyl formulas with
// the metric equal to delta.
struct RStarDecomposition {
  double scalar_star = 0.0;
  Mat ricci_star;
  Mat schouten_star;
  Tensor4 weyl_star;
};

// n >= 3. Throws NotCurvatureLike when the pair antisymmetries or the pair
// exchange fail beyond `rel_tol`; a totally antisymmetric part is allowed and
// ends up in weyl_star.
RStarDecomposition decompose(const Tensor4& rstar, double rel_tol = 1e-8);

}  // namespace hypersurf
