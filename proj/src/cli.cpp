#include "hypersurf/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "hypersurf/cross_section.hpp"
#include "hypersurf/errors.hpp"
#include "hypersurf/flat_immersion.hpp"
#include "hypersurf/general_k.hpp"
#include "hypersurf/height_field.hpp"
#include "hypersurf/io.hpp"
#include "hypersurf/parallel.hpp"
#include "hypersurf/presets.hpp"

namespace hypersurf {

using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kObstruction = 2;
constexpr int kInputError = 3;
constexpr int kNumericalFailure = 4;

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidGrid:
    case ErrorCode::GridMismatch:
    case ErrorCode::NotPositiveDefinite:
    case ErrorCode::InvalidSeed:
    case ErrorCode::UnsupportedDimension:
    case ErrorCode::SpecError:
    case ErrorCode::IoError:
    case ErrorCode::SchemaError: return kInputError;
    case ErrorCode::NotPositiveOperator:
    case ErrorCode::WeylObstruction: return kObstruction;
    default: return kNumericalFailure;
  }
}

struct Seed {
  GridIndex node;
  double h = 0.0;
  Vec grad;
};

Vec to_vec(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())); }

Seed resolve_seed(const CliInvocation& inv, const MetricSpec& spec, const ChartGrid& grid) {
  const int n = grid.dim();
  Seed s;
  if (inv.seed_point) {
    if (static_cast<int>(inv.seed_point->size()) != n) throw Error(ErrorCode::InvalidSeed, "--seed-point needs dim entries");
    s.node = nearest_node(grid, to_vec(*inv.seed_point));
  } else if (spec.seed_point) {
    s.node = nearest_node(grid, *spec.seed_point);
  } else {
    s.node = grid.center();
  }
  s.h = inv.seed_h.value_or(spec.seed_h);
  if (inv.seed_grad) {
    if (static_cast<int>(inv.seed_grad->size()) != n) throw Error(ErrorCode::InvalidSeed, "--seed-grad needs dim entries");
    s.grad = to_vec(*inv.seed_grad);
  } else {
    s.grad = spec.seed_grad.value_or(Vec::Zero(n));
  }
  return s;
}

json seed_json(const Seed& s, const ChartGrid& grid) {
  const Vec x = grid.coords(s.node);
  return {{"index", s.node},
          {"point", std::vector<double>(x.data(), x.data() + x.size())},
          {"h", s.h},
          {"grad", std::vector<double>(s.grad.data(), s.grad.data() + s.grad.size())}};
}

std::string report_path(const CliInvocation& inv, const char* fallback) {
  if (!inv.report.empty()) return inv.report;
  if (!inv.out.empty()) return inv.out;
  return fallback;
}

void stamp(json& doc) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  doc["timestamp"] = buf;
}

bool report_allows_pi(const ObstructionReport& r) {
  if (!r.pi_field) return false;
  if (r.verdict == Verdict::SurfaceCase) return r.codazzi_residual <= r.tolerances.codazzi;
  return exit_code(r) == 0;
}

int cmd_analyze(const CliInvocation& inv, std::ostream& log) {
  const MetricSpec spec = load_spec(inv.metric);
  const MetricField g = generate(spec);
  const ObstructionReport r = analyze(g, inv.tolerances);
  const std::string path = report_path(inv, "report.json");
  write_report(r, path);
  log << "verdict " << to_string(r.verdict);
  if (r.verdict == Verdict::NotPositiveOperator)
    log << "  min operator eigenvalue " << r.min_operator_eigenvalue;
  else
    log << "  weyl* " << r.weyl_star_norm << "  gauss " << r.gauss_residual << "  codazzi " << r.codazzi_residual;
  log << "\nreport written to " << path << "\n";
  return exit_code(r);
}

int cmd_embed(const CliInvocation& inv, std::ostream& log) {
  if (inv.out.empty()) throw Error(ErrorCode::SpecError, "embed needs --out");
  const std::string format =
      !inv.format.empty() ? inv.format : std::filesystem::path(inv.out).extension() == ".obj" ? "obj" : "csv";
  if (format != "csv" && format != "obj") throw Error(ErrorCode::SpecError, "--format must be csv or obj");
  const MetricSpec spec = load_spec(inv.metric);
  const MetricField g = generate(spec);
  if (format == "obj" && g.dim() != 2) throw Error(ErrorCode::UnsupportedDimension, "OBJ export needs a two-dimensional chart");
  const ObstructionReport r = analyze(g, inv.tolerances);
  json doc;
  doc["analysis"] = to_json(r);
  const std::string path = inv.report.empty() ? inv.out + ".report.json" : inv.report;
  if (!report_allows_pi(r)) {
    stamp(doc);
    write_json(doc, path);
    log << "verdict " << to_string(r.verdict) << ": no immersion built\nreport written to " << path << "\n";
    return kObstruction;
  }
  const Seed seed = resolve_seed(inv, spec, g.grid());
  doc["seed"] = seed_json(seed, g.grid());

  const auto t0 = std::chrono::steady_clock::now();
  const HeightField height = integrate_height(*r.pi_field, g, seed.node, seed.h, seed.grad);
  const FlatMetric f = flat_metric(g, height);
  FlatOptions flat_opts;
  flat_opts.curvature_scale = f.reference_scale;
  const FlatCoordinates m = flat_coordinates(f.f, seed.node, flat_opts);
  const ImmersionGrid imm = assemble_immersion(m, height, g, *r.pi_field);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  doc["height"] = {{"valid_points", height.valid_count()},
                   {"guaranteed_radius", guaranteed_radius(*r.pi_field, g)}};
  doc["flat_metric"] = {{"flatness", f.flatness},
                        {"curvature_norm", f.curvature_norm},
                        {"closure_residual", m.closure_residual},
                        {"path_residual", m.path_residual}};
  doc["immersion"] = to_json(imm);
  doc["timings"] = {{"embedding", elapsed}};
  write_embedding(imm, inv.out, format == "obj" ? EmbeddingFormat::Obj : EmbeddingFormat::Csv);
  stamp(doc);
  write_json(doc, path);
  log << "verdict " << to_string(r.verdict) << "  valid points " << imm.valid_count() << "  induced residual "
      << imm.induced_residual << "\nembedding written to " << inv.out << ", report to " << path << "\n";
  return kOk;
}

int cmd_verify_k(const CliInvocation& inv, std::ostream& log) {
  if (inv.candidate.empty()) throw Error(ErrorCode::SpecError, "verify-k needs --candidate");
  const MetricSpec spec = load_spec(inv.metric);
  const MetricField g = generate(spec);
  const KTupleCandidate c = read_candidate_samples(inv.candidate);
  const KTupleResult res = verify_k_tuple(g, c);
  json doc;
  doc["k"] = c.k();
  doc["grid"] = grid_json(g.grid());
  doc["result"] = to_json(res);
  stamp(doc);
  const std::string path = report_path(inv, "verify_k.json");
  write_json(doc, path);
  log << "k = " << c.k() << "  residual " << res.residual << "  f positive definite "
      << (res.f_positive_definite ? "yes" : "no") << "\nreport written to " << path << "\n";
  return kOk;
}

int cmd_cross_section(const CliInvocation& inv, std::ostream& log) {
  if (inv.levels.empty()) throw Error(ErrorCode::SpecError, "cross-section needs --level");
  const MetricSpec spec = load_spec(inv.metric);
  const MetricField g = generate(spec);
  const ObstructionReport r = analyze(g, inv.tolerances);
  json doc;
  doc["analysis"] = to_json(r);
  const std::string path = report_path(inv, "cross_section.json");
  if (!report_allows_pi(r)) {
    stamp(doc);
    write_json(doc, path);
    log << "verdict " << to_string(r.verdict) << ": no height field\n";
    return kObstruction;
  }
  const Seed seed = resolve_seed(inv, spec, g.grid());
  doc["seed"] = seed_json(seed, g.grid());
  const CurvatureBundle curv = riemann(g);
  const HeightField height = integrate_height(*r.pi_field, g, seed.node, seed.h, seed.grad);
  json levels = json::array();
  for (double c : inv.levels) {
    const CrossSectionResult res = cross_section_check(g, curv, height, c);
    levels.push_back(to_json(res));
    log << "level " << c << "  residual " << res.residual << "  scaling [" << res.min_scaling << ", "
        << res.max_scaling << "]  points " << res.band_points << "\n";
  }
  doc["levels"] = levels;
  stamp(doc);
  write_json(doc, path);
  log << "report written to " << path << "\n";
  return kOk;
}

int cmd_presets(const CliInvocation& inv, std::ostream& log) {
  const std::filesystem::path dir = inv.out.empty() ? "." : inv.out;
  std::filesystem::create_directories(dir);
  for (const auto& [name, spec] : example_specs()) {
    const auto path = dir / (name + ".json");
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out << spec_to_text(spec);
    log << path.string() << "\n";
  }
  return kOk;
}

}  // namespace

int run(const CliInvocation& inv, std::ostream& log) {
  try {
    set_thread_count(inv.threads);
    if (inv.subcommand == "analyze") return cmd_analyze(inv, log);
    if (inv.subcommand == "embed") return cmd_embed(inv, log);
    if (inv.subcommand == "verify-k") return cmd_verify_k(inv, log);
    if (inv.subcommand == "cross-section") return cmd_cross_section(inv, log);
    if (inv.subcommand == "presets") return cmd_presets(inv, log);
    log << "unknown subcommand '" << inv.subcommand << "'\n";
    return kInputError;
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return status_for(e.code());
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kNumericalFailure;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& log) {
  CLI::App app{"Local isometric immersion of a chart metric into a Euclidean space of one more dimension"};
  app.require_subcommand(1, 1);
  CliInvocation inv;

  auto add_common = [&](CLI::App* sub, bool metric_required) {
    auto* opt = sub->add_option("--metric", inv.metric, "Metric spec file (JSON)")->check(CLI::ExistingFile);
    if (metric_required) opt->required();
    sub->add_option("--threads", inv.threads, "Worker thread cap (0 = runtime default)")->check(CLI::NonNegativeNumber);
  };
  auto add_tols = [&](CLI::App* sub) {
    sub->add_option("--tol-weyl", inv.tolerances.weyl, "Weyl* tolerance")->capture_default_str();
    sub->add_option("--tol-codazzi", inv.tolerances.codazzi, "Codazzi tolerance")->capture_default_str();
    sub->add_option("--tol-flat", inv.tolerances.flat, "Flatness tolerance")->capture_default_str();
  };
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed-point", inv.seed_point, "Base point, chart coordinates (snapped to the nearest node)")
        ->delimiter(',');
    sub->add_option("--seed-h", inv.seed_h, "Height at the base point");
    sub->add_option("--seed-grad", inv.seed_grad, "Height gradient at the base point")->delimiter(',');
  };

  CLI::App* analyze_cmd = app.add_subcommand("analyze", "Decide immersibility and write a report");
  add_common(analyze_cmd, true);
  add_tols(analyze_cmd);
  analyze_cmd->add_option("--out", inv.out, "Report path")->default_str("report.json");

  CLI::App* embed_cmd = app.add_subcommand("embed", "Build the immersion and export it");
  add_common(embed_cmd, true);
  add_tols(embed_cmd);
  add_seed(embed_cmd);
  embed_cmd->add_option("--out", inv.out, "Embedding path")->required();
  embed_cmd->add_option("--format", inv.format, "csv or obj (default: from the --out extension)")->check(CLI::IsMember({"csv", "obj"}));
  embed_cmd->add_option("--report", inv.report, "Report path (default <out>.report.json)");

  CLI::App* verify_cmd = app.add_subcommand("verify-k", "Check a candidate k-tuple of height fields");
  add_common(verify_cmd, true);
  verify_cmd->add_option("--candidate", inv.candidate, "Candidate samples file")->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("--out", inv.out, "Report path")->default_str("verify_k.json");

  CLI::App* cross_cmd = app.add_subcommand("cross-section", "Check the level-set curvature scaling");
  add_common(cross_cmd, true);
  add_tols(cross_cmd);
  add_seed(cross_cmd);
  cross_cmd->add_option("--level", inv.levels, "Level value(s) of h")->required()->delimiter(',');
  cross_cmd->add_option("--out", inv.out, "Report path")->default_str("cross_section.json");

  CLI::App* presets_cmd = app.add_subcommand("presets", "Write example metric spec files");
  presets_cmd->add_option("--out", inv.out, "Directory")->default_str(".");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    log << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    log << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    log << "error: " << e.what() << "\n";
    return kInputError;
  }
  inv.subcommand = app.get_subcommands().front()->get_name();
  return run(inv, log);
}

}  // namespace hypersurf
