#include "hypersurf/presets.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hypersurf/errors.hpp"
#include "hypersurf/io.hpp"

namespace hypersurf {

using nlohmann::json;

const char* to_string(MetricKind k) {
  switch (k) {
    case MetricKind::Sphere: return "sphere";
    case MetricKind::FlatCartesian: return "flat_cartesian";
    case MetricKind::FlatPolar: return "flat_polar";
    case MetricKind::QuadraticGraph: return "quadratic_graph";
    case MetricKind::Hyperbolic: return "hyperbolic";
    case MetricKind::Samples: return "samples";
  }
  return "unknown";
}

namespace fixtures {

namespace {

struct Profile {
  double s, ds, dds;
};

// Diagonal metric diag(1, S^2, S^2 sin^2 t1, ...) with derivatives from the
// logarithmic derivatives of each diagonal entry.
MetricEvaluator polar_metric(int n, std::function<Profile(double)> profile) {
  return [n, profile](const Vec& x, Mat& g, Tensor3* dg, Tensor4* ddg) {
    g = Mat::Zero(n, n);
    g(0, 0) = 1.0;
    const Profile pr = profile(x[0]);
    std::vector<Vec> dlog(n, Vec::Zero(n));
    std::vector<Vec> ddlog(n, Vec::Zero(n));  // diagonal of the Hessian of log g_ii
    for (int i = 1; i < n; ++i) {
      double v = pr.s * pr.s;
      dlog[i][0] = 2.0 * pr.ds / pr.s;
      ddlog[i][0] = 2.0 * (pr.dds / pr.s - pr.ds * pr.ds / (pr.s * pr.s));
      for (int j = 1; j < i; ++j) {
        const double sj = std::sin(x[j]);
        v *= sj * sj;
        dlog[i][j] = 2.0 * std::cos(x[j]) / sj;
        ddlog[i][j] = -2.0 / (sj * sj);
      }
      g(i, i) = v;
    }
    if (dg) {
      *dg = Tensor3(n);
      for (int i = 1; i < n; ++i)
        for (int c = 0; c < n; ++c) (*dg)(i, i, c) = g(i, i) * dlog[i][c];
    }
    if (ddg) {
      *ddg = Tensor4(n);
      for (int i = 1; i < n; ++i)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d)
            (*ddg)(i, i, c, d) = g(i, i) * (dlog[i][c] * dlog[i][d] + (c == d ? ddlog[i][c] : 0.0));
    }
  };
}

}  // namespace

MetricEvaluator sphere_polar(int n, double r) {
  return polar_metric(n, [r](double rho) {
    return Profile{r * std::sin(rho / r), std::cos(rho / r), -std::sin(rho / r) / r};
  });
}

MetricEvaluator flat_polar(int n) {
  return polar_metric(n, [](double rho) { return Profile{rho, 1.0, 0.0}; });
}

MetricEvaluator hyperbolic_polar(int n, double r) {
  return polar_metric(n, [r](double rho) {
    return Profile{r * std::sinh(rho / r), std::cosh(rho / r), std::sinh(rho / r) / r};
  });
}

MetricEvaluator sphere_graph(int n, double r) {
  return [n, r](const Vec& x, Mat& g, Tensor3* dg, Tensor4* ddg) {
    const double w = r * r - x.squaredNorm();
    const Mat id = Mat::Identity(n, n);
    g = id + x * x.transpose() / w;
    if (dg) {
      *dg = Tensor3(n);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c)
            (*dg)(a, b, c) = (id(a, c) * x[b] + x[a] * id(b, c)) / w + 2.0 * x[a] * x[b] * x[c] / (w * w);
    }
    if (ddg) {
      *ddg = Tensor4(n);
      const double w2 = w * w;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c)
            for (int d = 0; d < n; ++d)
              (*ddg)(a, b, c, d) = (id(a, c) * id(b, d) + id(a, d) * id(b, c)) / w +
                                   (id(a, c) * x[b] + x[a] * id(b, c)) * 2.0 * x[d] / w2 +
                                   2.0 * (id(a, d) * x[b] * x[c] + x[a] * id(b, d) * x[c] + x[a] * x[b] * id(c, d)) / w2 +
                                   8.0 * x[a] * x[b] * x[c] * x[d] / (w2 * w);
    }
  };
}

MetricEvaluator quadratic_graph(const Mat& pi0) {
  return [pi0](const Vec& x, Mat& g, Tensor3* dg, Tensor4* ddg) {
    const int n = static_cast<int>(pi0.rows());
    const Vec u = pi0 * x;
    g = Mat::Identity(n, n) + u * u.transpose();
    if (dg) {
      *dg = Tensor3(n);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c) (*dg)(a, b, c) = pi0(a, c) * u[b] + u[a] * pi0(b, c);
    }
    if (ddg) {
      *ddg = Tensor4(n);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c)
            for (int d = 0; d < n; ++d) (*ddg)(a, b, c, d) = pi0(a, c) * pi0(b, d) + pi0(a, d) * pi0(b, c);
    }
  };
}

MetricEvaluator flat_cartesian(int n) {
  return [n](const Vec&, Mat& g, Tensor3* dg, Tensor4* ddg) {
    g = Mat::Identity(n, n);
    if (dg) *dg = Tensor3(n);
    if (ddg) *ddg = Tensor4(n);
  };
}

}  // namespace fixtures

namespace {

[[noreturn]] void spec_error(const std::string& what) { throw Error(ErrorCode::SpecError, what); }

Vec read_vec(const json& j, const char* key, int n) {
  if (!j.contains(key) || !j[key].is_array()) spec_error(std::string("missing array '") + key + "'");
  const auto& a = j[key];
  if (static_cast<int>(a.size()) != n) spec_error(std::string("'") + key + "' must have " + std::to_string(n) + " entries");
  Vec v(n);
  for (int i = 0; i < n; ++i) {
    if (!a[i].is_number()) spec_error(std::string("'") + key + "' entries must be numbers");
    v[i] = a[i].get<double>();
  }
  return v;
}

ChartGrid read_grid(const json& j, int n) {
  if (!j.is_object()) spec_error("'grid' must be an object");
  if (!j.contains("shape") || !j["shape"].is_array() || static_cast<int>(j["shape"].size()) != n)
    spec_error("'grid.shape' must have one entry per dimension");
  std::vector<int> shape(n);
  for (int i = 0; i < n; ++i) {
    if (!j["shape"][i].is_number_integer()) spec_error("'grid.shape' entries must be integers");
    shape[i] = j["shape"][i].get<int>();
  }
  Vec origin, spacing;
  if (j.contains("lower") || j.contains("upper")) {
    const Vec lo = read_vec(j, "lower", n);
    const Vec hi = read_vec(j, "upper", n);
    origin = lo;
    spacing = Vec(n);
    for (int i = 0; i < n; ++i) spacing[i] = shape[i] > 1 ? (hi[i] - lo[i]) / (shape[i] - 1) : 0.0;
  } else {
    origin = read_vec(j, "origin", n);
    spacing = read_vec(j, "spacing", n);
  }
  try {
    return ChartGrid(origin, spacing, shape);
  } catch (const Error& e) {
    spec_error(std::string("bad grid: ") + e.what());
  }
}

json vec_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

}  // namespace

void validate_spec(const MetricSpec& s) {
  if (s.dim < 2) spec_error("dim must be >= 2");
  switch (s.kind) {
    case MetricKind::Sphere:
      if (!(s.radius > 0.0)) spec_error("sphere requires radius > 0");
      if (s.chart != "polar_cap" && s.chart != "graph_cap") spec_error("sphere chart must be polar_cap or graph_cap");
      break;
    case MetricKind::Hyperbolic:
      if (!(s.radius > 0.0)) spec_error("hyperbolic requires radius > 0");
      break;
    case MetricKind::QuadraticGraph:
      if (s.pi0.rows() != s.dim || s.pi0.cols() != s.dim) spec_error("pi0 must be dim x dim");
      if ((s.pi0 - s.pi0.transpose()).norm() > 1e-12 * std::max(1.0, s.pi0.norm())) spec_error("pi0 must be symmetric");
      break;
    case MetricKind::Samples:
      if (s.file.empty()) spec_error("samples requires 'file'");
      break;
    default: break;
  }
  if (s.kind != MetricKind::Samples) {
    if (!s.grid) spec_error("missing 'grid'");
    if (s.grid->dim() != s.dim) spec_error("grid dimension differs from dim");
  }
  if (s.seed_point && s.seed_point->size() != s.dim) spec_error("seed point has wrong length");
  if (s.seed_grad && s.seed_grad->size() != s.dim) spec_error("seed gradient has wrong length");
}

MetricSpec parse_spec(const std::string& text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text, nullptr, true, true);
  } catch (const json::exception& e) {
    spec_error(std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) spec_error("document must be an object");
  MetricSpec s;
  const std::string kind = j.value("kind", "");
  if (kind == "sphere") s.kind = MetricKind::Sphere;
  else if (kind == "flat_cartesian") s.kind = MetricKind::FlatCartesian;
  else if (kind == "flat_polar") s.kind = MetricKind::FlatPolar;
  else if (kind == "quadratic_graph") s.kind = MetricKind::QuadraticGraph;
  else if (kind == "hyperbolic") s.kind = MetricKind::Hyperbolic;
  else if (kind == "samples") s.kind = MetricKind::Samples;
  else spec_error("unknown kind '" + kind + "'");

  try {
    if (j.contains("dim")) s.dim = j["dim"].get<int>();
    s.radius = j.value("radius", 1.0);
    s.chart = j.value("chart", s.kind == MetricKind::Sphere ? "polar_cap" : "");
    const std::string deriv = j.value("derivatives", "analytic");
    if (deriv != "analytic" && deriv != "finite_difference") spec_error("derivatives must be analytic or finite_difference");
    s.analytic = deriv == "analytic";
    const int order = j.value("stencil_order", 2);
    if (order != 2 && order != 4) spec_error("stencil_order must be 2 or 4");
    s.order = order == 4 ? StencilOrder::Fourth : StencilOrder::Second;
    if (s.kind == MetricKind::Samples) {
      s.file = j.value("file", "");
      if (!s.file.empty() && s.file.is_relative()) s.file = base_dir / s.file;
    }
    if (s.kind == MetricKind::QuadraticGraph) {
      if (!j.contains("pi0") || !j["pi0"].is_array()) spec_error("quadratic_graph requires 'pi0'");
      const auto& rows = j["pi0"];
      if (j.contains("dim") == false) s.dim = static_cast<int>(rows.size());
      s.pi0 = Mat::Zero(s.dim, s.dim);
      if (static_cast<int>(rows.size()) != s.dim) spec_error("pi0 must be dim x dim");
      for (int a = 0; a < s.dim; ++a) {
        if (!rows[a].is_array() || static_cast<int>(rows[a].size()) != s.dim) spec_error("pi0 must be dim x dim");
        for (int b = 0; b < s.dim; ++b) s.pi0(a, b) = rows[a][b].get<double>();
      }
    }
    if (j.contains("grid")) s.grid = read_grid(j["grid"], s.dim);
    if (j.contains("seed")) {
      const json& sd = j["seed"];
      if (sd.contains("point")) s.seed_point = read_vec(sd, "point", s.dim);
      if (sd.contains("grad")) s.seed_grad = read_vec(sd, "grad", s.dim);
      s.seed_h = sd.value("h", 0.0);
    }
  } catch (const json::exception& e) {
    spec_error(std::string("bad field type: ") + e.what());
  }
  validate_spec(s);
  return s;
}

MetricSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str(), path.parent_path());
}

std::string spec_to_text(const MetricSpec& s) {
  json j;
  j["kind"] = to_string(s.kind);
  j["dim"] = s.dim;
  if (s.kind == MetricKind::Sphere || s.kind == MetricKind::Hyperbolic) j["radius"] = s.radius;
  if (s.kind == MetricKind::Sphere) j["chart"] = s.chart;
  if (s.kind == MetricKind::QuadraticGraph) {
    json rows = json::array();
    for (int a = 0; a < s.pi0.rows(); ++a) rows.push_back(vec_json(s.pi0.row(a).transpose()));
    j["pi0"] = rows;
  }
  if (s.kind == MetricKind::Samples) j["file"] = s.file.string();
  if (!s.analytic) j["derivatives"] = "finite_difference";
  if (s.order == StencilOrder::Fourth) j["stencil_order"] = 4;
  if (s.grid) {
    json g;
    g["origin"] = vec_json(s.grid->origin());
    g["spacing"] = vec_json(s.grid->spacing());
    g["shape"] = s.grid->shape();
    j["grid"] = g;
  }
  if (s.seed_point || s.seed_grad || s.seed_h != 0.0) {
    json sd;
    if (s.seed_point) sd["point"] = vec_json(*s.seed_point);
    if (s.seed_grad) sd["grad"] = vec_json(*s.seed_grad);
    sd["h"] = s.seed_h;
    j["seed"] = sd;
  }
  return j.dump(2) + "\n";
}

MetricField generate(const MetricSpec& s) {
  validate_spec(s);
  if (s.kind == MetricKind::Samples) {
    MetricField m = read_metric_samples(s.file);
    m.set_stencil_order(s.order);
    return m;
  }
  MetricEvaluator eval;
  switch (s.kind) {
    case MetricKind::Sphere:
      eval = s.chart == "graph_cap" ? fixtures::sphere_graph(s.dim, s.radius) : fixtures::sphere_polar(s.dim, s.radius);
      break;
    case MetricKind::FlatPolar: eval = fixtures::flat_polar(s.dim); break;
    case MetricKind::Hyperbolic: eval = fixtures::hyperbolic_polar(s.dim, s.radius); break;
    case MetricKind::QuadraticGraph: eval = fixtures::quadratic_graph(s.pi0); break;
    default: eval = fixtures::flat_cartesian(s.dim); break;
  }
  MetricField m = MetricField::from_evaluator(*s.grid, eval);
  if (!s.analytic) m = m.sampled_copy();
  m.set_stencil_order(s.order);
  return m;
}

namespace {

ChartGrid box(const Vec& lower, const Vec& upper, const std::vector<int>& shape) {
  Vec spacing(lower.size());
  for (int i = 0; i < lower.size(); ++i) spacing[i] = (upper[i] - lower[i]) / (shape[i] - 1);
  return ChartGrid(lower, spacing, shape);
}

}  // namespace

std::map<std::string, MetricSpec> example_specs() {
  std::map<std::string, MetricSpec> out;
  const double pi = std::acos(-1.0);

  MetricSpec s2;
  s2.kind = MetricKind::Sphere;
  s2.dim = 2;
  s2.chart = "polar_cap";
  s2.grid = box(Eigen::Vector2d(0.6, -0.9), Eigen::Vector2d(pi - 0.6, 0.9), {65, 65});
  s2.seed_point = Eigen::Vector2d(pi / 2, 0.0);
  s2.order = StencilOrder::Fourth;
  out["sphere2"] = s2;

  MetricSpec s3;
  s3.kind = MetricKind::Sphere;
  s3.dim = 3;
  s3.chart = "polar_cap";
  s3.grid = box(Eigen::Vector3d(pi / 2 - 0.6, pi / 2 - 0.6, -0.6), Eigen::Vector3d(pi / 2 + 0.6, pi / 2 + 0.6, 0.6), {33, 33, 33});
  s3.seed_point = Eigen::Vector3d(pi / 2, pi / 2, 0.0);
  s3.order = StencilOrder::Fourth;
  out["sphere3"] = s3;

  MetricSpec h3 = s3;
  h3.kind = MetricKind::Hyperbolic;
  h3.chart.clear();
  h3.grid = box(Eigen::Vector3d(0.5, pi / 2 - 0.5, -0.5), Eigen::Vector3d(1.5, pi / 2 + 0.5, 0.5), {17, 17, 17});
  h3.seed_point = Eigen::Vector3d(1.0, pi / 2, 0.0);
  out["hyperbolic3"] = h3;

  MetricSpec fp;
  fp.kind = MetricKind::FlatPolar;
  fp.dim = 2;
  fp.grid = box(Eigen::Vector2d(1.0, -0.5), Eigen::Vector2d(2.0, 0.5), {33, 33});
  fp.seed_point = Eigen::Vector2d(1.5, 0.0);
  out["flat_polar2"] = fp;

  MetricSpec q3;
  q3.kind = MetricKind::QuadraticGraph;
  q3.dim = 3;
  q3.pi0 = Eigen::Vector3d(1.0, 2.0, 3.0).asDiagonal();
  q3.grid = box(Vec::Constant(3, -0.1), Vec::Constant(3, 0.1), {17, 17, 17});
  q3.seed_point = Vec::Zero(3);
  q3.order = StencilOrder::Fourth;
  out["quadratic3"] = q3;

  MetricSpec fc;
  fc.kind = MetricKind::FlatCartesian;
  fc.dim = 3;
  fc.grid = box(Vec::Constant(3, -1.0), Vec::Constant(3, 1.0), {9, 9, 9});
  out["flat3"] = fc;
  return out;
}

}  // namespace hypersurf
