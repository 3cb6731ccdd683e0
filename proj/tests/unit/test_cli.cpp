#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hypersurf/cli.hpp"
#include "hypersurf/io.hpp"
#include "hypersurf/presets.hpp"
#include "support.hpp"

using namespace hypersurf;
using namespace testing;
using nlohmann::json;

namespace {

const std::filesystem::path kPresets = HYPERSURF_PRESETS_DIR;

int hypersurf_cli(const std::string& args, const std::filesystem::path& log) {
  const std::string cmd = std::string(HYPERSURF_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

json load(const std::filesystem::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

void strip_volatile(json& j) {
  if (!j.is_object()) return;
  j.erase("timestamp");
  j.erase("timings");
  for (auto& [key, value] : j.items()) strip_volatile(value);
}

std::string preset(const std::string& name) { return (kPresets / (name + ".json")).string(); }

}  // namespace

TEST_CASE("analyze exit codes follow the verdict") {
  const auto dir = scratch_dir("cli_analyze");
  CHECK(hypersurf_cli("analyze --metric " + preset("sphere3") + " --out " + (dir / "s3.json").string(), dir / "log") == 0);
  CHECK(load(dir / "s3.json").at("verdict") == "Immersible");

  CHECK(hypersurf_cli("analyze --metric " + preset("hyperbolic3") + " --out " + (dir / "h3.json").string(), dir / "log") ==
        2);
  CHECK(load(dir / "h3.json").at("verdict") == "NotPositiveOperator");

  CHECK(hypersurf_cli("analyze --metric " + preset("flat3") + " --out " + (dir / "f3.json").string(), dir / "log") == 0);
  CHECK(load(dir / "f3.json").at("verdict") == "FlatCase");

  CHECK(hypersurf_cli("analyze --metric " + preset("sphere3") + " --tol-weyl 1e-3 --out " + (dir / "t.json").string(),
                      dir / "log") == 0);
  CHECK(load(dir / "t.json").at("tolerances").at("weyl") == 1e-3);
}

TEST_CASE("embed writes a sphere cap mesh") {
  const auto dir = scratch_dir("cli_embed");
  const auto obj = dir / "cap.obj";
  REQUIRE(hypersurf_cli("embed --metric " + preset("sphere2") + " --out " + obj.string(), dir / "log") == 0);
  const json report = load(dir / "cap.obj.report.json");
  CHECK(report.at("immersion").at("induced_residual").get<double>() < 1e-3);
  CHECK(report.at("immersion").at("second_form_residual").get<double>() < 1e-3);

  const MetricField g = generate(load_spec(preset("sphere2")));
  std::ifstream in(obj);
  std::string line;
  std::size_t vertices = 0;
  std::vector<Vec> points;
  while (std::getline(in, line)) {
    if (line.rfind("v ", 0) != 0) continue;
    ++vertices;
    std::istringstream ls(line.substr(2));
    Vec x(3);
    ls >> x[0] >> x[1] >> x[2];
    points.push_back(x);
  }
  CHECK(vertices == g.grid().size());
  const SphereFit fit = fit_sphere(points);
  CHECK(fit.radius == doctest::Approx(1.0).epsilon(1e-3));

  CHECK(hypersurf_cli("embed --metric " + preset("sphere3") + " --format obj --out " + (dir / "s3.obj").string(),
                      dir / "log") == 3);
  CHECK(hypersurf_cli("embed --metric " + preset("hyperbolic3") + " --out " + (dir / "h3.csv").string(), dir / "log") ==
        2);
}

TEST_CASE("input errors exit with 3") {
  const auto dir = scratch_dir("cli_errors");
  CHECK(hypersurf_cli("analyze --metric " + preset("sphere3") + " --bogus", dir / "log") == 3);
  CHECK(hypersurf_cli("analyze --metric " + (dir / "missing.json").string(), dir / "log") == 3);
  CHECK(hypersurf_cli("", dir / "log") == 3);
  std::ofstream(dir / "broken.json") << "{\"kind\": \"sphere\"";
  CHECK(hypersurf_cli("analyze --metric " + (dir / "broken.json").string(), dir / "log") == 3);
  CHECK(hypersurf_cli("--help", dir / "log") == 0);
}

TEST_CASE("presets command writes loadable specs") {
  const auto dir = scratch_dir("cli_presets");
  REQUIRE(hypersurf_cli("presets --out " + dir.string(), dir / "log") == 0);
  for (const auto& [name, spec] : example_specs()) {
    CAPTURE(name);
    const MetricSpec back = load_spec(dir / (name + ".json"));
    CHECK(spec_to_text(back) == spec_to_text(spec));
  }
}

TEST_CASE("reports are byte-identical apart from the timestamp") {
  const auto dir = scratch_dir("cli_determinism");
  for (const char* run : {"a", "b"})
    REQUIRE(hypersurf_cli("embed --metric " + preset("flat_polar2") + " --out " + (dir / run).string() + ".csv",
                          dir / "log") == 0);
  json a = load(dir / "a.csv.report.json");
  json b = load(dir / "b.csv.report.json");
  strip_volatile(a);
  strip_volatile(b);
  CHECK(a.dump() == b.dump());
  std::ifstream ca(dir / "a.csv"), cb(dir / "b.csv");
  std::stringstream sa, sb;
  sa << ca.rdbuf();
  sb << cb.rdbuf();
  CHECK(sa.str() == sb.str());
}

TEST_CASE("verify-k and cross-section subcommands") {
  const auto dir = scratch_dir("cli_verify");
  const MetricField g = generate(load_spec(preset("sphere2")));
  KTupleCandidate zero{g.grid(), {TensorField::scalar(g.grid())}};
  for (std::size_t p = 0; p < g.grid().size(); ++p) zero.fields[0].set_valid(p, true);
  write_candidate_samples(zero, dir / "zero.csv");
  REQUIRE(hypersurf_cli("verify-k --metric " + preset("sphere2") + " --candidate " + (dir / "zero.csv").string() +
                            " --out " + (dir / "k.json").string(),
                        dir / "log") == 0);
  const json k = load(dir / "k.json");
  CHECK(k.at("k") == 1);
  CHECK(k.at("result").at("residual").get<double>() == doctest::Approx(1.0).epsilon(1e-12));

  REQUIRE(hypersurf_cli("cross-section --metric " + preset("sphere3") + " --level 0.02,0.04 --out " +
                            (dir / "cs.json").string(),
                        dir / "log") == 0);
  const json cs = load(dir / "cs.json");
  REQUIRE(cs.at("levels").size() == 2);
  for (const auto& level : cs.at("levels")) {
    CHECK(level.at("residual").get<double>() < 1e-3);
    CHECK(level.at("min_scaling").get<double>() >= 1.0 - 1e-9);
  }
}

TEST_CASE("in-process entry point rejects unknown subcommands") {
  std::ostringstream log;
  const char* argv[] = {"hypersurf", "frobnicate"};
  CHECK(run_cli(2, argv, log) == 3);
  CliInvocation inv;
  inv.subcommand = "analyze";
  inv.metric = preset("sphere2");
  inv.out = (scratch_dir("cli_inproc") / "s2.json").string();
  CHECK(run(inv, log) == 2);  // SurfaceCase is not a definite answer
}
