#pragma once

#include <filesystem>
#include <string>
#include <variant>

#include <json.hpp>

#include "hypersurf/cross_section.hpp"
#include "hypersurf/flat_immersion.hpp"
#include "hypersurf/general_k.hpp"
#include "hypersurf/metric.hpp"
#include "hypersurf/obstruction.hpp"

namespace hypersurf {

// Samples files are CSV with a leading "# key=value ..." line carrying
// kind (metric | candidate), dim, origin, spacing and shape, then a column
// header and one row per grid point. Metric rows hold the grid index and the
// upper triangle of g (or all n^2 entries, which are then checked for
// symmetry); candidate rows hold the grid index and h1..hk, and missing rows
// mark invalid points. See docs/samples_format.md.
using Samples = std::variant<MetricField, KTupleCandidate>;

Samples read_samples(const std::filesystem::path& path);
MetricField read_metric_samples(const std::filesystem::path& path);
KTupleCandidate read_candidate_samples(const std::filesystem::path& path);
void write_metric_samples(const MetricField& metric, const std::filesystem::path& path);
void write_candidate_samples(const KTupleCandidate& candidate, const std::filesystem::path& path);

nlohmann::json grid_json(const ChartGrid& grid);
nlohmann::json to_json(const ObstructionReport& report);
nlohmann::json to_json(const ImmersionGrid& imm);
nlohmann::json to_json(const KTupleResult& result);
nlohmann::json to_json(const CrossSectionResult& result);

// Pretty-printed with sorted keys; throws IoError.
void write_json(const nlohmann::json& doc, const std::filesystem::path& path);
void write_report(const ObstructionReport& report, const std::filesystem::path& path);

enum class EmbeddingFormat { Csv, Obj };

// CSV: x_1..x_n, X_1..X_{n+1}, valid. OBJ (n = 2 only): one vertex per grid
// node, two triangles per quad whose corners are all valid.
void write_embedding(const ImmersionGrid& imm, const std::filesystem::path& path, EmbeddingFormat format);

}  // namespace hypersurf
