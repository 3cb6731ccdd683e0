#include <doctest.h>

#include "hypersurf/cross_section.hpp"
#include "hypersurf/errors.hpp"
#include "support.hpp"

using namespace hypersurf;
using namespace testing;

namespace {

TensorField metric_as_pi(const MetricField& g) {
  TensorField pi = TensorField::covariant(g.grid(), 2);
  for (std::size_t p = 0; p < g.grid().size(); ++p) {
    pi.set_matrix(p, g.value(p));
    pi.set_valid(p, true);
  }
  return pi;
}

struct Sphere3 {
  MetricField g;
  CurvatureBundle curvature;
  HeightField height;
};

Sphere3 sphere3(const Vec& seed_grad) {
  const ChartGrid grid = cube(3, Eigen::Vector3d(kPi / 2, kPi / 2, 0.0), 0.4, 25);
  MetricField g = MetricField::from_evaluator(grid, fixtures::sphere_polar(3, 1.0));
  CurvatureBundle curv = riemann(g);
  HeightField h = integrate_height(metric_as_pi(g), g, GridIndex{12, 12, 12}, 0.0, seed_grad);
  return {std::move(g), std::move(curv), std::move(h)};
}

}  // namespace

TEST_CASE("slices of the three-sphere scale by 1 / (1 - z^2)") {
  const Sphere3 s = sphere3(Vec::Zero(3));
  for (double level : {0.05, 0.1, 0.15}) {
    CAPTURE(level);
    const CrossSectionResult r = cross_section_check(s.g, s.curvature, s.height, level);
    CHECK(r.band_points > 0u);
    CHECK(r.residual < 1e-3);
    CHECK(r.min_scaling >= 1.0 - 1e-9);
    CHECK(r.max_projector_defect < 1e-10);
    // h = 1 - cos d, so |grad h|^2 = sin^2 d = 1 - (1 - level)^2
    const double z = 1.0 - level;
    const double expected = 1.0 / (1.0 - z * z);
    CHECK(r.min_scaling < expected * 1.1);
    CHECK(r.max_scaling > expected / 1.1);
  }
}

TEST_CASE("slices stay within tolerance when the curvature is differenced") {
  const Sphere3 s = sphere3(Vec::Zero(3));
  std::vector<Mat> values(s.g.grid().size());
  for (std::size_t p = 0; p < values.size(); ++p) values[p] = s.g.value(p);
  MetricField sampled(s.g.grid(), std::move(values));
  sampled.set_stencil_order(StencilOrder::Fourth);
  const CurvatureBundle curv = riemann(sampled);
  const CrossSectionResult r = cross_section_check(sampled, curv, s.height, 0.1);
  CHECK(r.residual > 1e-12);
  CHECK(r.residual < 1e-3);
}

TEST_CASE("slice through the great sphere has unit scaling") {
  // seed at distance pi/2 - 0.25 from the pole of h; the great sphere lies at h = sin 0.25
  const double d0 = kPi / 2 - 0.25;
  const Sphere3 s = sphere3(Eigen::Vector3d(std::sin(d0), 0.0, 0.0));
  const CrossSectionResult r = cross_section_check(s.g, s.curvature, s.height, std::sin(0.25));
  CHECK(r.band_points > 0u);
  CHECK(r.min_scaling >= 1.0 - 1e-9);
  CHECK(r.max_scaling < 1.01);
  CHECK(r.residual < 1e-3);
}

TEST_CASE("slices of a flat cylinder are flat") {
  const ChartGrid grid = cube(3, Vec::Zero(3), 0.5, 17);
  const MetricField g = MetricField::from_evaluator(grid, fixtures::flat_cartesian(3));
  const Mat pi0 = Eigen::Vector3d(1.0, 0.0, 0.0).asDiagonal();
  const HeightField h = integrate_height(constant_field(grid, pi0), g, GridIndex{8, 8, 8}, 0.0, Vec::Zero(3));
  const CrossSectionResult r = cross_section_check(g, riemann(g), h, 0.02);
  CHECK(r.band_points > 0u);
  CHECK(r.residual < 1e-12);

  const HeightField tilted =
      integrate_height(constant_field(grid, Mat::Zero(3, 3)), g, GridIndex{8, 8, 8}, 0.0, Eigen::Vector3d(0.3, 0.2, 0.1));
  const CrossSectionResult t = cross_section_check(g, riemann(g), tilted, 0.05);
  CHECK(t.band_points > 0u);
  CHECK(t.residual < 1e-12);
  CHECK(t.min_scaling == doctest::Approx(1.0 / 0.14).epsilon(1e-12));
}

TEST_CASE("cross-section errors") {
  const Sphere3 s = sphere3(Vec::Zero(3));
  try {
    cross_section_check(s.g, s.curvature, s.height, 10.0);
    FAIL("expected EmptyLevelBand");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyLevelBand);
  }
  try {
    cross_section_check(s.g, s.curvature, s.height, 0.0, 1e-9);
    FAIL("expected DegenerateGradient");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateGradient);
  }
}
