#include "hypersurf/io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>

#include "hypersurf/errors.hpp"

namespace hypersurf {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& what) { throw Error(ErrorCode::SchemaError, what); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& s) {
  const std::string t = trim(s);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v)) schema_error("bad number '" + t + "'");
  return v;
}

int parse_int(const std::string& s) {
  const std::string t = trim(s);
  char* end = nullptr;
  const long v = std::strtol(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size()) schema_error("bad integer '" + t + "'");
  return static_cast<int>(v);
}

struct SamplesFile {
  std::map<std::string, std::string> meta;
  ChartGrid grid;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

SamplesFile load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  SamplesFile f;
  std::string line;
  if (!std::getline(in, line) || line.rfind("#", 0) != 0) schema_error("missing '# kind=...' header line");
  std::istringstream hs(line.substr(1));
  std::string tok;
  while (hs >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) schema_error("bad header token '" + tok + "'");
    f.meta[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  for (const char* key : {"kind", "dim", "origin", "spacing", "shape"})
    if (!f.meta.count(key)) schema_error(std::string("header lacks '") + key + "'");
  const int n = parse_int(f.meta["dim"]);
  const auto o = split(f.meta["origin"], ','), s = split(f.meta["spacing"], ','), sh = split(f.meta["shape"], ',');
  if (n < 1 || static_cast<int>(o.size()) != n || static_cast<int>(s.size()) != n || static_cast<int>(sh.size()) != n)
    schema_error("origin/spacing/shape must have dim entries");
  Vec origin(n), spacing(n);
  std::vector<int> shape(n);
  for (int a = 0; a < n; ++a) {
    origin[a] = parse_double(o[a]);
    spacing[a] = parse_double(s[a]);
    shape[a] = parse_int(sh[a]);
  }
  f.grid = ChartGrid(origin, spacing, shape);
  if (!std::getline(in, line)) schema_error("missing column header");
  for (const auto& c : split(line, ',')) f.columns.push_back(trim(c));
  while (std::getline(in, line)) {
    if (trim(line).empty() || line[0] == '#') continue;
    auto cells = split(line, ',');
    if (cells.size() != f.columns.size())
      schema_error("row has " + std::to_string(cells.size()) + " cells, expected " + std::to_string(f.columns.size()));
    f.rows.push_back(std::move(cells));
  }
  return f;
}

std::size_t row_index(const SamplesFile& f, const std::vector<std::string>& row) {
  const int n = f.grid.dim();
  GridIndex idx(n);
  for (int a = 0; a < n; ++a) idx[a] = parse_int(row[a]);
  if (!f.grid.contains(idx)) schema_error("grid index out of range");
  return f.grid.linear(idx);
}

std::string header_line(const std::string& kind, const ChartGrid& g, const std::string& extra) {
  std::string o, s, sh;
  for (int a = 0; a < g.dim(); ++a) {
    const char* sep = a ? "," : "";
    o += sep + fmt(g.origin()[a]);
    s += sep + fmt(g.spacing()[a]);
    sh += sep + std::to_string(g.shape()[a]);
  }
  return "# kind=" + kind + " dim=" + std::to_string(g.dim()) + " origin=" + o + " spacing=" + s + " shape=" + sh +
         extra + "\n";
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  return out;
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

MetricField read_metric_samples(const std::filesystem::path& path) {
  const SamplesFile f = load(path);
  if (f.meta.at("kind") != "metric") schema_error("expected kind=metric");
  const int n = f.grid.dim();
  const int upper = n * (n + 1) / 2;
  const bool full = static_cast<int>(f.columns.size()) == n + n * n;
  if (!full && static_cast<int>(f.columns.size()) != n + upper)
    schema_error("metric rows need the grid index and " + std::to_string(upper) + " entries of g");
  std::vector<Mat> values(f.grid.size());
  std::vector<std::uint8_t> seen(f.grid.size(), 0);
  for (const auto& row : f.rows) {
    const std::size_t p = row_index(f, row);
    if (seen[p]) schema_error("duplicate grid index");
    seen[p] = 1;
    Mat g(n, n);
    int c = n;
    if (full) {
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) g(a, b) = parse_double(row[c++]);
      if ((g - g.transpose()).norm() > 1e-12 * g.norm())
        schema_error("metric row is not symmetric at point " + std::to_string(p));
    } else {
      for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) g(a, b) = g(b, a) = parse_double(row[c++]);
    }
    values[p] = g;
  }
  for (std::size_t p = 0; p < seen.size(); ++p)
    if (!seen[p]) schema_error("metric sample missing for point " + std::to_string(p));
  return MetricField(f.grid, std::move(values));
}

KTupleCandidate read_candidate_samples(const std::filesystem::path& path) {
  const SamplesFile f = load(path);
  if (f.meta.at("kind") != "candidate") schema_error("expected kind=candidate");
  const int n = f.grid.dim();
  const int k = static_cast<int>(f.columns.size()) - n;
  if (k < 1) schema_error("candidate rows need at least one field column");
  if (f.meta.count("k") && parse_int(f.meta.at("k")) != k) schema_error("column count disagrees with k");
  KTupleCandidate c;
  c.grid = f.grid;
  c.fields.assign(k, TensorField::scalar(f.grid));
  for (const auto& row : f.rows) {
    const std::size_t p = row_index(f, row);
    for (int m = 0; m < k; ++m) {
      c.fields[m].at(p)[0] = parse_double(row[n + m]);
      c.fields[m].set_valid(p, true);
    }
  }
  return c;
}

Samples read_samples(const std::filesystem::path& path) {
  const SamplesFile f = load(path);
  const std::string kind = f.meta.at("kind");
  if (kind == "metric") return read_metric_samples(path);
  if (kind == "candidate") return read_candidate_samples(path);
  schema_error("unknown samples kind '" + kind + "'");
}

void write_metric_samples(const MetricField& metric, const std::filesystem::path& path) {
  const ChartGrid& g = metric.grid();
  const int n = g.dim();
  std::ofstream out = open_out(path);
  out << header_line("metric", g, "");
  for (int a = 0; a < n; ++a) out << (a ? "," : "") << "i" << a;
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) out << ",g" << a << b;
  out << "\n";
  for (std::size_t p = 0; p < g.size(); ++p) {
    const GridIndex idx = g.multi(p);
    for (int a = 0; a < n; ++a) out << (a ? "," : "") << idx[a];
    const Mat& v = metric.value(p);
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) out << "," << fmt(v(a, b));
    out << "\n";
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

void write_candidate_samples(const KTupleCandidate& c, const std::filesystem::path& path) {
  const ChartGrid& g = c.grid;
  const int n = g.dim();
  std::ofstream out = open_out(path);
  out << header_line("candidate", g, " k=" + std::to_string(c.k()));
  for (int a = 0; a < n; ++a) out << (a ? "," : "") << "i" << a;
  for (int m = 0; m < c.k(); ++m) out << ",h" << (m + 1);
  out << "\n";
  for (std::size_t p = 0; p < g.size(); ++p) {
    bool valid = true;
    for (const auto& f : c.fields) valid = valid && f.valid(p);
    if (!valid) continue;
    const GridIndex idx = g.multi(p);
    for (int a = 0; a < n; ++a) out << (a ? "," : "") << idx[a];
    for (const auto& f : c.fields) out << "," << fmt(f.at(p)[0]);
    out << "\n";
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

json grid_json(const ChartGrid& g) {
  json j;
  j["origin"] = std::vector<double>(g.origin().data(), g.origin().data() + g.dim());
  j["spacing"] = std::vector<double>(g.spacing().data(), g.spacing().data() + g.dim());
  j["shape"] = g.shape();
  return j;
}

json to_json(const ObstructionReport& r) {
  json j;
  j["verdict"] = to_string(r.verdict);
  j["dim"] = r.dim;
  j["grid"] = grid_json(r.grid);
  j["tolerances"] = {{"flat", r.tolerances.flat},
                     {"weyl", r.tolerances.weyl},
                     {"codazzi", r.tolerances.codazzi},
                     {"gauss", r.tolerances.gauss},
                     {"positivity", r.tolerances.positivity}};
  j["flatness"] = number(r.flatness);
  j["weyl_star_norm"] = number(r.weyl_star_norm);
  j["gauss_residual"] = number(r.gauss_residual);
  j["gauss_absolute"] = number(r.gauss_absolute);
  j["codazzi_residual"] = number(r.codazzi_residual);
  j["codazzi_absolute"] = number(r.codazzi_absolute);
  j["min_operator_eigenvalue"] = number(r.min_operator_eigenvalue);
  j["conditioning"] = number(r.conditioning);
  j["curvature_points"] = r.curvature_points;
  j["codazzi_points"] = r.codazzi_points;
  j["pi_unique_up_to_sign"] = r.pi_unique_up_to_sign;
  j["pi_present"] = r.pi_field.has_value();
  if (r.pi_field) {
    const GridIndex c = r.grid.center();
    const std::size_t p = r.grid.linear(c);
    if (r.pi_field->valid(p)) {
      const Mat m = r.pi_field->matrix(p);
      json rows = json::array();
      for (int a = 0; a < m.rows(); ++a) {
        json row = json::array();
        for (int b = 0; b < m.cols(); ++b) row.push_back(m(a, b));
        rows.push_back(row);
      }
      j["pi_at_center"] = {{"index", c}, {"value", rows}};
    }
  }
  json t = json::object();
  for (const auto& [k, v] : r.timings) t[k] = v;
  j["timings"] = t;
  return j;
}

json to_json(const ImmersionGrid& imm) {
  return {{"valid_points", imm.valid_count()},
          {"induced_residual", number(imm.induced_residual)},
          {"second_form_residual", number(imm.second_form_residual)},
          {"normal_orthogonality", number(imm.normal_orthogonality)},
          {"normal_unit_defect", number(imm.normal_unit_defect)},
          {"gram_schmidt_discrepancy", number(imm.gram_schmidt_discrepancy)},
          {"inverse_identity_residual", number(imm.inverse_identity_residual)},
          {"tangency_residual", number(imm.tangency_residual)}};
}

json to_json(const KTupleResult& r) {
  return {{"residual", number(r.residual)},
          {"absolute", number(r.absolute)},
          {"f_positive_definite", r.f_positive_definite},
          {"min_f_eigenvalue", number(r.min_f_eigenvalue)},
          {"max_condition", number(r.max_condition)},
          {"inverse_identity_residual", number(r.inverse_identity_residual)},
          {"points", r.points}};
}

json to_json(const CrossSectionResult& r) {
  return {{"level", r.level},
          {"residual", number(r.residual)},
          {"band_points", r.band_points},
          {"skipped_degenerate", r.skipped_degenerate},
          {"min_scaling", number(r.min_scaling)},
          {"max_scaling", number(r.max_scaling)},
          {"max_projector_defect", number(r.max_projector_defect)}};
}

void write_json(const json& doc, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << doc.dump(2) << "\n";
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

void write_report(const ObstructionReport& report, const std::filesystem::path& path) {
  json j = to_json(report);
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  j["timestamp"] = buf;
  write_json(j, path);
}

void write_embedding(const ImmersionGrid& imm, const std::filesystem::path& path, EmbeddingFormat format) {
  const ChartGrid& g = imm.grid;
  const int n = g.dim();
  std::ofstream out = open_out(path);
  if (format == EmbeddingFormat::Csv) {
    for (int a = 0; a < n; ++a) out << "x_" << (a + 1) << ",";
    for (int a = 0; a <= n; ++a) out << "X_" << (a + 1) << ",";
    out << "valid\n";
    for (std::size_t p = 0; p < g.size(); ++p) {
      const Vec x = g.coords(p);
      for (int a = 0; a < n; ++a) out << fmt(x[a]) << ",";
      for (int a = 0; a <= n; ++a) out << (imm.is_valid(p) ? fmt(imm.map[p][a]) : std::string("nan")) << ",";
      out << (imm.is_valid(p) ? 1 : 0) << "\n";
    }
  } else {
    if (n != 2) throw Error(ErrorCode::UnsupportedDimension, "OBJ export needs a two-dimensional chart", n);
    out << "# " << g.shape()[0] << "x" << g.shape()[1] << " grid, unreferenced vertices are invalid nodes\n";
    for (std::size_t p = 0; p < g.size(); ++p) {
      if (imm.is_valid(p))
        out << "v " << fmt(imm.map[p][0]) << " " << fmt(imm.map[p][1]) << " " << fmt(imm.map[p][2]) << "\n";
      else
        out << "v 0 0 0\n";
    }
    const int rows = g.shape()[0], cols = g.shape()[1];
    for (int i = 0; i + 1 < rows; ++i)
      for (int j = 0; j + 1 < cols; ++j) {
        const std::size_t a = g.linear({i, j}), b = g.linear({i + 1, j}), c = g.linear({i + 1, j + 1}),
                          d = g.linear({i, j + 1});
        if (!imm.is_valid(a) || !imm.is_valid(b) || !imm.is_valid(c) || !imm.is_valid(d)) continue;
        out << "f " << a + 1 << " " << b + 1 << " " << c + 1 << "\n";
        out << "f " << a + 1 << " " << c + 1 << " " << d + 1 << "\n";
      }
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace hypersurf
