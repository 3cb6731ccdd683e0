#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include "hypersurf/curvature.hpp"
#include "hypersurf/grid.hpp"
#include "hypersurf/metric.hpp"
#include "hypersurf/presets.hpp"
#include "hypersurf/tensor.hpp"
#include "hypersurf/tensor_field.hpp"

namespace testing {

using hypersurf::ChartGrid;
using hypersurf::Mat;
using hypersurf::MetricField;
using hypersurf::Tensor3;
using hypersurf::Tensor4;
using hypersurf::TensorField;
using hypersurf::Vec;

inline const double kPi = std::acos(-1.0);

inline ChartGrid box(const Vec& lower, const Vec& upper, std::vector<int> shape) {
  Vec spacing(lower.size());
  for (int i = 0; i < lower.size(); ++i) spacing[i] = (upper[i] - lower[i]) / (shape[i] - 1);
  return ChartGrid(lower, spacing, std::move(shape));
}

inline ChartGrid cube(int n, const Vec& centre, double half_width, int points) {
  return box(centre.array() - half_width, centre.array() + half_width, std::vector<int>(n, points));
}

inline std::mt19937& rng() {
  static std::mt19937 engine(20240611u);
  return engine;
}

inline Mat random_matrix(int rows, int cols) {
  std::normal_distribution<double> normal;
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = normal(rng());
  return m;
}

inline Mat random_spd(int n) {
  const Mat a = random_matrix(n, n);
  return a * a.transpose() + 0.5 * Mat::Identity(n, n);
}

inline Mat random_rotation(int n) {
  Eigen::HouseholderQR<Mat> qr(random_matrix(n, n));
  Mat q = qr.householderQ();
  if (q.determinant() < 0) q.col(0) *= -1.0;
  return q;
}

// Symmetric matrix with the given eigenvalues in a random orthonormal basis.
inline Mat with_spectrum(const Vec& eigenvalues) {
  const Mat q = random_rotation(static_cast<int>(eigenvalues.size()));
  return q * eigenvalues.asDiagonal() * q.transpose();
}

inline double rel_diff(const Mat& a, const Mat& b) {
  const double scale = std::max(a.norm(), b.norm());
  return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

inline double max_abs(const Tensor4& t) {
  double m = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) m = std::max(m, std::abs(t.data()[i]));
  return m;
}

inline double max_abs_diff(const Tensor4& a, const Tensor4& b) { return max_abs(a - b); }

// K (g_ac g_bd - g_ad g_bc)
inline Tensor4 constant_curvature(const Mat& g, double k) {
  const int n = static_cast<int>(g.rows());
  Tensor4 r(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) r(a, b, c, d) = k * (g(a, c) * g(b, d) - g(a, d) * g(b, c));
  return r;
}

// Pi_ac Pi_bd - Pi_ad Pi_bc, written out independently of the library.
inline Tensor4 gauss_product(const Mat& pi) {
  const int n = static_cast<int>(pi.rows());
  Tensor4 r(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) r(a, b, c, d) = pi(a, c) * pi(b, d) - pi(a, d) * pi(b, c);
  return r;
}

// Round metric diag(1, S^2, S^2 sin^2 t1, ...) with S = r sin(rho / r).
inline Mat sphere_polar_metric(const Vec& x, double r) {
  const int n = static_cast<int>(x.size());
  Mat g = Mat::Zero(n, n);
  g(0, 0) = 1.0;
  double s = r * std::sin(x[0] / r);
  double v = s * s;
  for (int i = 1; i < n; ++i) {
    g(i, i) = v;
    v *= std::sin(x[i]) * std::sin(x[i]);
  }
  return g;
}

// Brute-force projection of a random algebraic curvature tensor onto the
// trace-free part: the Weyl-like tensors are the null space of the linear
// map T -> (symmetries, Bianchi, traces) on R^(n^4).
inline Tensor4 random_weyl(int n) {
  const int m = n * n * n * n;
  auto id = [n](int a, int b, int c, int d) { return ((a * n + b) * n + c) * n + d; };
  std::vector<Eigen::VectorXd> rows;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          Eigen::VectorXd r1 = Eigen::VectorXd::Zero(m);
          r1[id(a, b, c, d)] += 1;
          r1[id(b, a, c, d)] += 1;
          rows.push_back(r1);
          Eigen::VectorXd r2 = Eigen::VectorXd::Zero(m);
          r2[id(a, b, c, d)] += 1;
          r2[id(a, b, d, c)] += 1;
          rows.push_back(r2);
          Eigen::VectorXd r3 = Eigen::VectorXd::Zero(m);
          r3[id(a, b, c, d)] += 1;
          r3[id(c, d, a, b)] -= 1;
          rows.push_back(r3);
          Eigen::VectorXd r4 = Eigen::VectorXd::Zero(m);
          r4[id(a, b, c, d)] += 1;
          r4[id(a, c, d, b)] += 1;
          r4[id(a, d, b, c)] += 1;
          rows.push_back(r4);
        }
  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d) {
      Eigen::VectorXd tr = Eigen::VectorXd::Zero(m);
      for (int a = 0; a < n; ++a) tr[id(a, b, a, d)] += 1;
      rows.push_back(tr);
    }
  Mat constraints(static_cast<Eigen::Index>(rows.size()), m);
  for (std::size_t i = 0; i < rows.size(); ++i) constraints.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  Eigen::JacobiSVD<Mat> svd(constraints, Eigen::ComputeFullV);
  const Vec& sv = svd.singularValues();
  int rank = 0;
  while (rank < sv.size() && sv[rank] > 1e-10 * sv[0]) ++rank;
  const Mat null_space = svd.matrixV().rightCols(m - rank);
  const Vec w = null_space * random_matrix(static_cast<int>(null_space.cols()), 1);
  Tensor4 out(n);
  for (int i = 0; i < m; ++i) out.data()[i] = w[i];
  out *= 1.0 / max_abs(out);
  return out;
}

// Least-squares sphere through points: |X|^2 = 2 c.X + (rho^2 - |c|^2).
struct SphereFit {
  Vec centre;
  double radius = 0.0;
  double max_deviation = 0.0;
};

inline SphereFit fit_sphere(const std::vector<Vec>& points) {
  const int d = static_cast<int>(points.front().size());
  Mat a(static_cast<Eigen::Index>(points.size()), d + 1);
  Vec b(static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    a.row(static_cast<Eigen::Index>(i)) << 2.0 * points[i].transpose(), 1.0;
    b[static_cast<Eigen::Index>(i)] = points[i].squaredNorm();
  }
  const Vec sol = a.colPivHouseholderQr().solve(b);
  SphereFit fit;
  fit.centre = sol.head(d);
  fit.radius = std::sqrt(sol[d] + fit.centre.squaredNorm());
  for (const Vec& p : points) fit.max_deviation = std::max(fit.max_deviation, std::abs((p - fit.centre).norm() - fit.radius));
  return fit;
}

// Constant symmetric field on a grid.
inline TensorField constant_field(const ChartGrid& grid, const Mat& value) {
  TensorField f = TensorField::covariant(grid, 2);
  f.declare_symmetric();
  for (std::size_t p = 0; p < grid.size(); ++p) {
    f.set_matrix(p, value);
    f.set_valid(p, true);
  }
  return f;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("hypersurf_tests_" + name);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing
