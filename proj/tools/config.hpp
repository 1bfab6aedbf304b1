#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "camp/clustering.hpp"
#include "camp/features.hpp"
#include "camp/ingest.hpp"
#include "camp/projection.hpp"
#include "camp/scoring.hpp"
#include "camp/synthetic.hpp"

namespace camp::cli {

struct Paths {
    /// Raw inputs; empty means the simulate output under <out>/data.
    std::string balls;
    std::string summaries;
    std::string lineups;
    std::string venue_map;       ///< optional JSON {ground_country: class}
    std::string resource_table;  ///< optional; the built-in excerpt otherwise
    std::string out = "camp_out";
};

struct RunConfig {
    std::uint64_t seed = 42;
    Paths paths;
    PreprocessConfig preprocess;
    FeatureConfig features;
    ClusteringConfig clustering;
    ProjectionConfig projection;
    std::vector<ModelKind> evaluate_models{ModelKind::Knn, ModelKind::Ridge, ModelKind::Forest};
    ScoringParams scoring;
    double lnc_par = 235.0;
    GeneratorConfig simulate;
    /// Directory with balls.csv, matches.csv, lineups.csv and optionally venues.json.
    std::optional<std::string> with_dataset;

    /// Field-level checks; throws ValidationError naming the offending key.
    void validate() const;
};

/// Strict reader: unknown keys and wrongly typed values are errors.
[[nodiscard]] RunConfig parse_config(const nlohmann::json& j);
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);

/// Everything that influences outputs, in canonical order; the output directory is excluded.
[[nodiscard]] nlohmann::json canonical_json(const RunConfig& c);
[[nodiscard]] std::string config_hash(const RunConfig& c);

struct Seeds {
    std::uint64_t root = 0;
    std::uint64_t simulate = 0;
    std::uint64_t clustering = 0;
    std::uint64_t projection = 0;
    std::uint64_t evaluation = 0;
};

[[nodiscard]] Seeds derive_seeds(std::uint64_t root);

}  // namespace camp::cli
