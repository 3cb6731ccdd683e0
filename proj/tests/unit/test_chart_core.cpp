#include <doctest.h>

#include "hypersurf/covariant.hpp"
#include "hypersurf/curvature.hpp"
#include "hypersurf/curvature_operator.hpp"
#include "hypersurf/errors.hpp"
#include "hypersurf/frame.hpp"
#include "hypersurf/presets.hpp"
#include "support.hpp"

using namespace hypersurf;
using namespace testing;

namespace {

MetricField sampled(const ChartGrid& grid, const MetricEvaluator& eval) {
  return MetricField::from_evaluator(grid, eval).sampled_copy();
}

// Metric with exact first derivatives stored and second derivatives taken by
// differencing them, so the curvature identities only hold to O(h^2).
MetricField stored_first_derivatives(const ChartGrid& grid, const MetricEvaluator& eval) {
  std::vector<Mat> values(grid.size());
  std::vector<Tensor3> first(grid.size());
  for (std::size_t p = 0; p < grid.size(); ++p) eval(grid.coords(p), values[p], &first[p], nullptr);
  return MetricField::with_first_derivatives(grid, values, first, std::vector<std::uint8_t>(grid.size(), 1));
}

double max_christoffel_gap(const MetricField& a, const MetricField& b) {
  double worst = 0.0;
  for (std::size_t p = 0; p < a.grid().size(); ++p) {
    if (!b.jet_available(p, false)) continue;
    const Tensor3 ga = christoffel(a, p);
    const Tensor3 gb = christoffel(b, p);
    for (std::size_t i = 0; i < ga.size(); ++i) worst = std::max(worst, std::abs(ga.data()[i] - gb.data()[i]));
  }
  return worst;
}

double max_riemann_gap(const CurvatureBundle& a, const CurvatureBundle& b) {
  double worst = 0.0;
  for (std::size_t p = 0; p < a.valid.size(); ++p)
    if (a.is_valid(p) && b.is_valid(p)) worst = std::max(worst, max_abs_diff(a.riemann[p], b.riemann[p]));
  return worst;
}

}  // namespace

TEST_CASE("grid rejects bad shapes and spacings") {
  CHECK_THROWS_AS(ChartGrid(Vec::Zero(2), Vec::Ones(2), {5, 4}), Error);
  CHECK_THROWS_AS(ChartGrid(Vec::Zero(2), Vec::Constant(2, -0.1), {5, 5}), Error);
  try {
    ChartGrid(Vec::Zero(1), Vec::Ones(1), {3});
    FAIL("expected InvalidGrid");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidGrid);
  }
}

TEST_CASE("grid indexing round trip") {
  const ChartGrid grid(Eigen::Vector3d(0.0, 1.0, 2.0), Eigen::Vector3d(0.1, 0.2, 0.3), {5, 6, 7});
  CHECK(grid.size() == 210u);
  for (std::size_t p = 0; p < grid.size(); p += 7) CHECK(grid.linear(grid.multi(p)) == p);
  const Vec x = grid.coords(GridIndex{1, 2, 3});
  CHECK(x[0] == doctest::Approx(0.1));
  CHECK(x[1] == doctest::Approx(1.4));
  CHECK(x[2] == doctest::Approx(2.9));
  CHECK(grid.margin(GridIndex{1, 2, 3}) == 1);
}

TEST_CASE("tensor field symmetry declaration is enforced") {
  const ChartGrid grid = cube(2, Vec::Zero(2), 1.0, 5);
  TensorField f = constant_field(grid, Eigen::Matrix2d{{1.0, 0.5}, {0.5, 2.0}});
  CHECK_NOTHROW(f.validate());
  f.set_matrix(3, Eigen::Matrix2d{{1.0, 0.5}, {0.4, 2.0}});
  CHECK_THROWS_AS(f.validate(), Error);
}

TEST_CASE("christoffel vanishes for the Cartesian metric") {
  const ChartGrid grid = cube(3, Vec::Zero(3), 1.0, 7);
  const MetricField g = sampled(grid, fixtures::flat_cartesian(3));
  const Tensor3 gamma = christoffel(g, grid.linear(GridIndex{3, 3, 3}));
  for (std::size_t i = 0; i < gamma.size(); ++i) CHECK(gamma.data()[i] == 0.0);
}

TEST_CASE("polar christoffel symbols at rho = 2") {
  // g = diag(1, rho^2): Gamma^rho_phiphi = -rho, Gamma^phi_rhophi = 1/rho.
  const double h = 1e-3;
  const ChartGrid grid(Eigen::Vector2d(2.0 - 2 * h, 0.3 - 2 * h), Vec::Constant(2, h), {5, 5});
  const std::size_t centre = grid.linear(GridIndex{2, 2});
  const MetricField exact = MetricField::from_evaluator(grid, fixtures::flat_polar(2));
  const MetricField fd = exact.sampled_copy();
  for (const MetricField* g : {&exact, &fd}) {
    const Tensor3 gamma = christoffel(*g, centre);
    const double tol = g->has_evaluator() ? 1e-14 : 1e-6;
    CHECK(std::abs(gamma(0, 1, 1) - (-2.0)) < tol);
    CHECK(std::abs(gamma(1, 0, 1) - 0.5) < tol);
    CHECK(std::abs(gamma(1, 1, 0) - 0.5) < tol);
    CHECK(std::abs(gamma(0, 0, 0)) < tol);
    CHECK(std::abs(gamma(1, 1, 1)) < tol);
  }
}

TEST_CASE("christoffel vanishes at the origin of a quadratic graph") {
  const Mat pi0 = Eigen::Vector3d(1.0, 2.0, 3.0).asDiagonal();
  const ChartGrid grid = cube(3, Vec::Zero(3), 0.02, 5);
  const std::size_t origin = grid.linear(GridIndex{2, 2, 2});
  const Tensor3 exact = christoffel(MetricField::from_evaluator(grid, fixtures::quadratic_graph(pi0)), origin);
  const Tensor3 fd = christoffel(sampled(grid, fixtures::quadratic_graph(pi0)), origin);
  for (std::size_t i = 0; i < exact.size(); ++i) {
    CHECK(std::abs(exact.data()[i]) < 1e-15);
    CHECK(std::abs(fd.data()[i]) < 1e-12);
  }
}

TEST_CASE("christoffel symmetry and metric compatibility") {
  const ChartGrid grid = cube(3, Eigen::Vector3d(1.2, 1.0, 0.2), 0.3, 7);
  const MetricField g = MetricField::from_evaluator(grid, fixtures::sphere_polar(3, 1.0));
  for (std::size_t p = 0; p < grid.size(); p += 17) {
    const MetricJet j = g.jet(p, false);
    const Tensor3 gamma = christoffel(j);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 3; ++c) {
          CHECK(gamma(a, b, c) == doctest::Approx(gamma(a, c, b)).epsilon(1e-14));
          // d_c g_ab = g_ad Gamma^d_bc + g_bd Gamma^d_ac
          double rhs = 0.0;
          for (int d = 0; d < 3; ++d) rhs += j.g(a, d) * gamma(d, b, c) + j.g(b, d) * gamma(d, a, c);
          CHECK(std::abs(j.dg(a, b, c) - rhs) < 1e-13);
        }
  }
}

TEST_CASE("boundary points need an evaluator") {
  const ChartGrid grid = cube(2, Eigen::Vector2d(1.0, 1.0), 0.2, 5);
  const MetricField exact = MetricField::from_evaluator(grid, fixtures::sphere_polar(2, 1.0));
  const MetricField fd = exact.sampled_copy();
  CHECK_NOTHROW(christoffel(exact, 0));
  try {
    christoffel(fd, 0);
    FAIL("expected BoundaryStencil");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BoundaryStencil);
  }
  const CurvatureBundle b = riemann(fd);
  CHECK_FALSE(b.is_valid(0));
  CHECK(b.valid_count() == 9u);
}

TEST_CASE("flat polar metric has vanishing curvature") {
  const ChartGrid grid = box(Eigen::Vector2d(1.0, -0.5), Eigen::Vector2d(2.0, 0.5), {17, 17});
  const CurvatureBundle exact = riemann(MetricField::from_evaluator(grid, fixtures::flat_polar(2)));
  const CurvatureBundle fd = riemann(sampled(grid, fixtures::flat_polar(2)));
  for (std::size_t p = 0; p < grid.size(); ++p) {
    if (exact.is_valid(p)) CHECK(max_abs(exact.riemann[p]) < 1e-14);
    if (fd.is_valid(p)) CHECK(max_abs(fd.riemann[p]) < 1e-10);
  }
  CHECK(flatness_ratio(exact) < 1e-14);
}

TEST_CASE("sphere curvature matches the constant-curvature closed form") {
  for (double r : {1.0, 2.0}) {
    const ChartGrid grid = cube(3, Eigen::Vector3d(r * 1.1, 1.3, 0.0), 0.4, 5);
    const CurvatureBundle b = riemann(MetricField::from_evaluator(grid, fixtures::sphere_polar(3, r)));
    for (std::size_t p = 0; p < grid.size(); ++p) {
      const Mat g = sphere_polar_metric(grid.coords(p), r);
      const Tensor4 oracle = constant_curvature(g, 1.0 / (r * r));
      CHECK(max_abs_diff(b.riemann[p], oracle) < 1e-12 * std::max(1.0, max_abs(oracle)));
      // Ricci = (n - 1) K g, scalar = n (n - 1) K
      CHECK(rel_diff(b.ricci[p], 2.0 / (r * r) * g) < 1e-12);
      CHECK(b.scalar[p] == doctest::Approx(6.0 / (r * r)).epsilon(1e-12));
    }
  }
}

TEST_CASE("unit sphere graph chart is orthonormal at the pole with R_1212 = 1") {
  const ChartGrid grid = cube(2, Vec::Zero(2), 0.02, 5);
  const CurvatureBundle exact = riemann(MetricField::from_evaluator(grid, fixtures::sphere_graph(2, 1.0)));
  const CurvatureBundle fd = riemann(sampled(grid, fixtures::sphere_graph(2, 1.0)));
  const std::size_t pole = grid.linear(GridIndex{2, 2});
  CHECK(exact.riemann[pole](0, 1, 0, 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(fd.riemann[pole](0, 1, 0, 1) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("quadratic graph operator spectrum is the pairwise products") {
  const Mat pi0 = Eigen::Vector3d(1.0, 2.0, 3.0).asDiagonal();
  const ChartGrid grid = cube(3, Vec::Zero(3), 0.02, 5);
  const MetricField g = MetricField::from_evaluator(grid, fixtures::quadratic_graph(pi0));
  const std::size_t origin = grid.linear(GridIndex{2, 2, 2});
  const CurvatureBundle b = riemann(g);
  const CurvatureOperator op = to_operator(b.riemann[origin], orthonormal_frame(g.value(origin)));
  CHECK(op.eigenvalues[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(op.eigenvalues[1] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(op.eigenvalues[2] == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("analytic and finite-difference curvature agree to second order") {
  const Vec centre = Eigen::Vector3d(1.1, 1.2, 0.1);
  double gamma_gap[2];
  double riemann_gap[2];
  for (int level = 0; level < 2; ++level) {
    const int points = level == 0 ? 9 : 17;
    const ChartGrid grid = cube(3, centre, 0.2, points);
    const MetricField exact = MetricField::from_evaluator(grid, fixtures::sphere_polar(3, 1.0));
    const MetricField fd = exact.sampled_copy();
    gamma_gap[level] = max_christoffel_gap(exact, fd);
    riemann_gap[level] = max_riemann_gap(riemann(exact), riemann(fd));
  }
  CHECK(gamma_gap[0] < 1e-2);
  CHECK(riemann_gap[0] < 1e-2);
  CHECK(gamma_gap[0] / gamma_gap[1] == doctest::Approx(4.0).epsilon(0.25));
  CHECK(riemann_gap[0] / riemann_gap[1] == doctest::Approx(4.0).epsilon(0.25));
}

TEST_CASE("curvature symmetry defects shrink at second order") {
  // The pair antisymmetries are built into the curvature formula; the pair
  // exchange and Bianchi identities rely on mixed partials commuting.
  // Compared on the nodes the two grids share.
  const Vec centre = Eigen::Vector3d(0.2, 0.1, -0.1);
  const ChartGrid coarse = cube(3, centre, 0.3, 9);
  const ChartGrid fine = cube(3, centre, 0.3, 17);
  const CurvatureBundle bc = riemann(stored_first_derivatives(coarse, fixtures::sphere_graph(3, 1.0)));
  const CurvatureBundle bf = riemann(stored_first_derivatives(fine, fixtures::sphere_graph(3, 1.0)));
  SymmetryDefects d[2];
  auto worst = [](SymmetryDefects& w, const SymmetryDefects& s) {
    w.first_pair = std::max(w.first_pair, s.first_pair);
    w.second_pair = std::max(w.second_pair, s.second_pair);
    w.exchange = std::max(w.exchange, s.exchange);
    w.bianchi = std::max(w.bianchi, s.bianchi);
  };
  for (std::size_t p = 0; p < coarse.size(); ++p) {
    if (!bc.is_valid(p)) continue;
    GridIndex idx = coarse.multi(p);
    for (int& i : idx) i *= 2;
    const std::size_t q = fine.linear(idx);
    REQUIRE(bf.is_valid(q));
    worst(d[0], symmetry_defects(bc.riemann[p]));
    worst(d[1], symmetry_defects(bf.riemann[q]));
  }
  CHECK(d[0].first_pair < 1e-14);
  CHECK(d[0].second_pair < 1e-14);
  CHECK(d[0].exchange > 1e-6);
  CHECK(d[0].bianchi > 1e-6);
  for (double ratio : {d[0].exchange / d[1].exchange, d[0].bianchi / d[1].bianchi}) {
    CHECK(ratio > 3.0);
    CHECK(ratio < 5.0);
  }
}

TEST_CASE("covariant derivative of the metric vanishes") {
  const ChartGrid grid = cube(3, Eigen::Vector3d(1.1, 1.2, 0.1), 0.2, 9);
  const MetricField g = sampled(grid, fixtures::sphere_polar(3, 1.0));
  TensorField gf = TensorField::covariant(grid, 2);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    gf.set_matrix(p, g.value(p));
    gf.set_valid(p, true);
  }
  const TensorField dg = covariant_derivative(g, gf);
  CHECK(dg.rank() == 3);
  double worst = 0.0;
  for (std::size_t p = 0; p < grid.size(); ++p)
    if (dg.valid(p))
      for (double v : dg.at(p)) worst = std::max(worst, std::abs(v));
  CHECK(worst < 1e-12);
}

TEST_CASE("covariant derivative of a scalar on a Cartesian chart is the gradient") {
  const ChartGrid grid = cube(2, Vec::Zero(2), 1.0, 9);
  const MetricField g = sampled(grid, fixtures::flat_cartesian(2));
  TensorField h = TensorField::scalar(grid);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const Vec x = grid.coords(p);
    h.at(p)[0] = 0.3 + 2.0 * x[0] - x[1] + 0.5 * x[0] * x[1] + 0.25 * x[1] * x[1];
    h.set_valid(p, true);
  }
  const TensorField dh = covariant_derivative(g, h);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    if (!dh.valid(p)) continue;
    const Vec x = grid.coords(p);
    CHECK(dh.at(p)[0] == doctest::Approx(2.0 + 0.5 * x[1]).epsilon(1e-13));
    CHECK(dh.at(p)[1] == doctest::Approx(-1.0 + 0.5 * x[0] + 0.5 * x[1]).epsilon(1e-13));
  }
  CHECK(dh.valid_count() == 49u);
}

TEST_CASE("covariant derivative is linear and obeys the product rule") {
  const ChartGrid grid = cube(2, Eigen::Vector2d(1.2, 0.3), 0.3, 17);
  const MetricField g = MetricField::from_evaluator(grid, fixtures::sphere_polar(2, 1.0));
  TensorField u = TensorField::covariant(grid, 1);
  TensorField v = TensorField::covariant(grid, 1);
  TensorField sum = TensorField::covariant(grid, 1);
  TensorField outer = TensorField::covariant(grid, 2);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const Vec x = grid.coords(p);
    const Vec a = Eigen::Vector2d(std::sin(x[0]) + x[1], x[0] * x[1]);
    const Vec b = Eigen::Vector2d(std::cos(x[1]), 1.0 + x[0] * x[0]);
    for (int i = 0; i < 2; ++i) {
      u.at(p)[i] = a[i];
      v.at(p)[i] = b[i];
      sum.at(p)[i] = 2.0 * a[i] - 3.0 * b[i];
    }
    outer.set_matrix(p, a * b.transpose());
    for (TensorField* f : {&u, &v, &sum, &outer}) f->set_valid(p, true);
  }
  const TensorField du = covariant_derivative(g, u);
  const TensorField dv = covariant_derivative(g, v);
  const TensorField dsum = covariant_derivative(g, sum);
  const TensorField douter = covariant_derivative(g, outer);
  double linear_gap = 0.0;
  double product_gap = 0.0;
  double scale = 0.0;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    if (!du.valid(p)) continue;
    for (int k = 0; k < 4; ++k) linear_gap = std::max(linear_gap, std::abs(dsum.at(p)[k] - 2.0 * du.at(p)[k] + 3.0 * dv.at(p)[k]));
    // (u v)_ab;c = u_a;c v_b + u_a v_b;c
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c) {
          const double lhs = douter.at(p)[(a * 2 + b) * 2 + c];
          const double rhs = du.at(p)[a * 2 + c] * v.at(p)[b] + u.at(p)[a] * dv.at(p)[b * 2 + c];
          product_gap = std::max(product_gap, std::abs(lhs - rhs));
          scale = std::max(scale, std::abs(lhs));
        }
  }
  CHECK(linear_gap < 1e-12);
  // the product rule holds up to the O(h^2) stencil error
  CHECK(product_gap < 1e-3 * scale);
}

TEST_CASE("covariant derivative rejects fields on another grid") {
  const MetricField g = sampled(cube(2, Vec::Zero(2), 1.0, 5), fixtures::flat_cartesian(2));
  const TensorField h = TensorField::scalar(cube(2, Vec::Zero(2), 1.0, 6));
  try {
    covariant_derivative(g, h);
    FAIL("expected GridMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GridMismatch);
  }
}

TEST_CASE("orthonormal frame of simple metrics") {
  const OrthonormalFrame id = orthonormal_frame(Mat::Identity(3, 3));
  CHECK(id.frame.isApprox(Mat::Identity(3, 3)));
  const OrthonormalFrame d = orthonormal_frame(Eigen::Vector2d(1.0, 4.0).asDiagonal().toDenseMatrix());
  CHECK(d.frame.isApprox(Eigen::Vector2d(1.0, 0.5).asDiagonal().toDenseMatrix()));
  CHECK(d.coframe.isApprox(Eigen::Vector2d(1.0, 2.0).asDiagonal().toDenseMatrix()));
}

TEST_CASE("orthonormal frame over random SPD matrices") {
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 4;
    const Mat g = random_spd(n);
    const OrthonormalFrame f = orthonormal_frame(g);
    CHECK((f.frame.transpose() * g * f.frame - Mat::Identity(n, n)).norm() < 1e-12);
    CHECK((f.coframe * f.frame - Mat::Identity(n, n)).norm() < 1e-12);
    // triangular root: the coframe is upper triangular
    CHECK(f.coframe.triangularView<Eigen::StrictlyLower>().toDenseMatrix().norm() == 0.0);
  }
}

TEST_CASE("orthonormal frame rejects indefinite input") {
  try {
    orthonormal_frame(Eigen::Vector2d(1.0, -1.0).asDiagonal().toDenseMatrix());
    FAIL("expected NotPositiveDefinite");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotPositiveDefinite);
  }
}
