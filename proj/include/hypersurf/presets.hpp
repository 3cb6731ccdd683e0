#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "hypersurf/grid.hpp"
#include "hypersurf/metric.hpp"

namespace hypersurf {

enum class MetricKind { Sphere, FlatCartesian, FlatPolar, QuadraticGraph, Hyperbolic, Samples };

const char* to_string(MetricKind k);

// Human-editable description of a metric fixture. See docs/spec_format.md.
struct MetricSpec {
  MetricKind kind = MetricKind::FlatCartesian;
  int dim = 2;
  double radius = 1.0;
  std::string chart;  // sphere: polar_cap | graph_cap
  Mat pi0;            // quadratic_graph
  std::filesystem::path file;  // samples
  std::optional<ChartGrid> grid;
  bool analytic = true;
  StencilOrder order = StencilOrder::Second;

  std::optional<Vec> seed_point;
  double seed_h = 0.0;
  std::optional<Vec> seed_grad;
};

// Throws SpecError for malformed documents and IoError for unreadable files.
MetricSpec load_spec(const std::filesystem::path& path);
MetricSpec parse_spec(const std::string& text, const std::filesystem::path& base_dir = {});
std::string spec_to_text(const MetricSpec& spec);
void validate_spec(const MetricSpec& spec);

// Builds the metric; analytic kinds keep their exact evaluator unless the
// spec asks for finite differences.
MetricField generate(const MetricSpec& spec);

// Named example documents written by the presets command.
std::map<std::string, MetricSpec> example_specs();

namespace fixtures {

// Hyperspherical coordinates (rho, theta_1, ..., theta_{n-1}) with radial
// profile S: g = diag(1, S^2, S^2 sin^2 theta_1, ...).
MetricEvaluator sphere_polar(int n, double r);
MetricEvaluator flat_polar(int n);
MetricEvaluator hyperbolic_polar(int n, double r);

// Upper hemisphere of radius r as a graph over the ball |x| < r.
MetricEvaluator sphere_graph(int n, double r);

// Graph of v -> Pi0(v, v) / 2: g = delta + (Pi0 v)(Pi0 v)^T.
MetricEvaluator quadratic_graph(const Mat& pi0);

MetricEvaluator flat_cartesian(int n);

}  // namespace fixtures

}  // namespace hypersurf
