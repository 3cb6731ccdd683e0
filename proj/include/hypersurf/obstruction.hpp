#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hypersurf/curvature.hpp"
#include "hypersurf/curvature_operator.hpp"
#include "hypersurf/frame.hpp"
#include "hypersurf/metric.hpp"
#include "hypersurf/tensor_field.hpp"

namespace hypersurf {

struct Tolerances {
  double flat = 1e-8;
  double weyl = 1e-6;
  double codazzi = 1e-5;
  double gauss = 1e-6;
  double positivity = 1e-9;
};

enum class Verdict { Immersible, FlatCase, NotPositiveOperator, WeylObstruction, CodazziObstruction, SurfaceCase };

const char* to_string(Verdict v);

// Per-point outcome of the log-curvature construction.
struct PiRecovery {
  Mat pi;                      // coordinates
  Mat pi_frame;                // orthonormal-frame components
  double weyl_star_norm = 0.0;
  double min_eigenvalue = 0.0;  // smallest operator eigenvalue over the largest |eigenvalue|
  double conditioning = 1.0;    // largest over smallest eigenvalue
  bool positive = true;
};

// Solution of the Gauss equation at a point, without raising: when the
// operator is not positive `positive` is false and `pi` is empty. For n = 2
// the umbilic choice sqrt(K) g is returned (sqrt(-K) diag(1, -1) in the frame
// when K < 0).
PiRecovery try_recover_pi(const Tensor4& riemann, const OrthonormalFrame& frame, double positivity = 1e-9);

// Throws NotPositiveOperator or WeylObstruction (value = |C*|).
PiRecovery recover_pi(const Tensor4& riemann, const OrthonormalFrame& frame, double weyl_tol = 1e-6,
                      double positivity = 1e-9);

struct Residual {
  double relative = 0.0;
  double absolute = 0.0;
};

// |Pi ^ Pi - R| at one point, metric norm.
double gauss_defect(const Mat& pi, const Tensor4& riemann, const OrthonormalFrame& frame);

// max |Pi ^ Pi - R| over max(max |R|, max |Pi|^2), metric norms, over points
// where both fields are valid. Throws GridMismatch.
Residual gauss_residual(const TensorField& pi, const CurvatureBundle& curvature, const MetricField& metric);

// Y_abc = 1/2 (Pi_ab;c - Pi_ac;b)
TensorField codazzi_tensor(const TensorField& pi, const MetricField& metric);

// max |Y| over max(|grad Pi| + |Pi|). Throws GridMismatch.
Residual codazzi_residual(const TensorField& pi, const MetricField& metric);

struct ObstructionReport {
  Verdict verdict = Verdict::FlatCase;
  int dim = 0;
  ChartGrid grid;
  Tolerances tolerances;
  double flatness = 0.0;
  double weyl_star_norm = 0.0;
  double gauss_residual = 0.0;
  double gauss_absolute = 0.0;
  double codazzi_residual = 0.0;
  double codazzi_absolute = 0.0;
  double min_operator_eigenvalue = 0.0;
  double conditioning = 1.0;
  std::size_t curvature_points = 0;
  std::size_t codazzi_points = 0;
  bool pi_unique_up_to_sign = true;
  std::optional<TensorField> pi_field;
  std::vector<std::pair<std::string, double>> timings;
};

ObstructionReport analyze(const MetricField& metric, const Tolerances& tol = {});
ObstructionReport analyze(const MetricField& metric, const CurvatureBundle& curvature, const Tolerances& tol = {});

// Process exit status for a report: 0 for Immersible and FlatCase, otherwise 2.
// A SurfaceCase is never a definite answer, since Π is not unique for n = 2.
int exit_code(const ObstructionReport& report);

}  // namespace hypersurf
