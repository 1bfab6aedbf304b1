#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "camp/features.hpp"

namespace camp {

enum class EntityKind { Team, Batter, Bowler };

[[nodiscard]] std::string_view to_string(EntityKind k) noexcept;

/// Per-dimension z-score. Zero-variance dimensions pass through unchanged
/// (mean 0, scale 1).
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> scale;

    [[nodiscard]] static Standardizer fit(std::span<const std::vector<double>> rows);
    [[nodiscard]] static Standardizer identity(std::size_t dim);
    [[nodiscard]] std::vector<double> apply(std::span<const double> v) const;
    [[nodiscard]] std::size_t dim() const noexcept { return mean.size(); }
};

struct LabeledVector {
    std::string id;
    std::vector<double> values;
};

struct KMeansParams {
    int k = 3;
    std::uint64_t seed = 0;
    int max_iters = 300;
    double tol = 1e-6;  ///< stop when max centroid shift <= tol * max(1, largest centroid norm)
};

struct KMeansResult {
    std::vector<std::string> ids;           ///< input ids, sorted
    std::vector<int> labels;                ///< 0-based cluster per sorted id
    std::vector<std::vector<double>> centroids;
    double inertia = 0.0;
    std::vector<double> inertia_history;    ///< inertia after each assignment step
    int iterations = 0;
    bool converged = false;
};

/// Lloyd's algorithm with k-means++ seeding over the points sorted by id, so the
/// partition does not depend on input order. Throws ValidationError when there
/// are fewer than k distinct points.
[[nodiscard]] KMeansResult kmeans_fit(std::span<const LabeledVector> points, const KMeansParams& params);

/// 0-based index of the nearest centroid; ties go to the lowest index.
[[nodiscard]] std::size_t nearest_centroid(std::span<const std::vector<double>> centroids,
                                           std::span<const double> v);

/// Trained clustering of one entity kind. Cluster ids are 1..k; k+1 is the dummy
/// cluster for players with no history, which has no centroid.
struct ClusterModel {
    EntityKind kind = EntityKind::Team;
    int k = 0;
    std::uint64_t seed = 0;
    std::size_t dim = 0;
    Standardizer scaler;
    std::vector<std::vector<double>> centroids;  ///< in standardized space
    std::map<std::string, int> assignments;
    double inertia = 0.0;
    std::vector<double> inertia_history;

    [[nodiscard]] int dummy_cluster() const noexcept { return k + 1; }
};

/// Cluster id for a raw (unstandardized) feature vector.
[[nodiscard]] int assign(const ClusterModel& model, std::span<const double> raw);
/// As above, but players flagged with an empty history go straight to the dummy cluster.
[[nodiscard]] int assign(const ClusterModel& model, std::span<const double> raw, bool empty_history);

struct ClusteringConfig {
    int team_k = 3;
    int batter_k = 4;
    int bowler_k = 4;
    int max_iters = 300;
    double tol = 1e-6;
    bool standardize = true;
};

struct ClusterModels {
    ClusterModel teams;
    ClusterModel batters;
    ClusterModel bowlers;
};

/// Fits one model. Entries flagged `empty_history` bypass k-means and land in the
/// dummy cluster; if every entry is flagged the model has no centroids.
[[nodiscard]] ClusterModel fit_cluster_model(EntityKind kind, std::span<const LabeledVector> points,
                                             const std::vector<bool>& empty_history, int k,
                                             std::uint64_t seed, const ClusteringConfig& config);

/// Team model exactly as cluster_all fits it; player features depend on it.
[[nodiscard]] ClusterModel fit_team_model(std::span<const TeamFeatures> teams, const ClusteringConfig& config,
                                          std::uint64_t seed);

[[nodiscard]] ClusterModels cluster_all(std::span<const TeamFeatures> teams,
                                        std::span<const BatterFeatures> batters,
                                        std::span<const BowlerFeatures> bowlers,
                                        const ClusteringConfig& config, std::uint64_t seed);

[[nodiscard]] ClusterAssignments to_assignments(const ClusterModels& models);

[[nodiscard]] TeamClusterMap team_cluster_map(const ClusterModel& teams);

void to_json(nlohmann::json& j, const ClusterModel& m);
void from_json(const nlohmann::json& j, ClusterModel& m);

}  // namespace camp
