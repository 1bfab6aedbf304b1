#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "camp/clustering.hpp"
#include "camp/features.hpp"

namespace camp {

enum class ModelKind { Knn, Ridge, Forest };

[[nodiscard]] std::string_view to_string(ModelKind k) noexcept;
[[nodiscard]] ModelKind parse_model_kind(std::string_view s);

struct TrainingExample {
    MatchId match_id;
    int innings = 1;
    int boundary = 1;
    int overs_remaining = kOversPerInnings;
    int wickets_lost = 0;
    int runs_so_far = 0;
    int target = 0;  ///< 0 in the first innings
    double actual_remaining = 0.0;
    std::vector<double> x;  ///< StageVector::features()
};

/// One example per non-terminal boundary (1..n) of the given innings of every match.
[[nodiscard]] std::vector<TrainingExample> build_training_examples(std::span<const Match> matches,
                                                                   const ClusterAssignments& clusters,
                                                                   int innings);

[[nodiscard]] std::string training_examples_csv(std::span<const TrainingExample> examples);
[[nodiscard]] std::vector<TrainingExample> parse_training_examples(std::istream& in,
                                                                    const std::string& source);

// --- kNN --------------------------------------------------------------------

enum class KnnWeighting { InverseDistance, Softmax };

struct KnnParams {
    double epsilon = 1e-6;
    std::optional<std::size_t> max_neighbors;  ///< nearest-K cap; unset uses every candidate
    KnnWeighting weighting = KnnWeighting::InverseDistance;
    double softmax_temperature = 1.0;
    bool leave_one_out = true;
};

/// How far the candidate filter had to widen to find examples.
enum class Relaxation { Exact = 0, OversPlusMinusOne = 1, WicketsPlusMinusOne = 2, Global = 3 };

[[nodiscard]] std::string_view to_string(Relaxation r) noexcept;

struct KnnPrediction {
    double value = 0.0;
    Relaxation relaxation = Relaxation::Exact;
    std::size_t candidates = 0;
};

/// Example store for one innings. Features are z-scored with statistics of the
/// whole store; candidates share the query's (overs remaining, wickets lost).
class KnnStore {
public:
    KnnStore() = default;
    explicit KnnStore(std::vector<TrainingExample> examples);

    /// `exclude_match` removes that match's examples from every candidate set.
    [[nodiscard]] KnnPrediction predict(std::span<const double> x, int overs_remaining, int wickets_lost,
                                        const MatchId* exclude_match, const KnnParams& params) const;

    [[nodiscard]] const std::vector<TrainingExample>& examples() const noexcept { return examples_; }
    [[nodiscard]] const Standardizer& scaler() const noexcept { return scaler_; }
    [[nodiscard]] int innings() const noexcept { return innings_; }

private:
    std::vector<TrainingExample> examples_;
    std::vector<std::vector<double>> z_;
    Standardizer scaler_;
    std::map<std::pair<int, int>, std::vector<std::size_t>> buckets_;
    int innings_ = 1;

    void gather(int overs, int wickets, const MatchId* exclude, std::vector<std::size_t>& out) const;
};

// --- ridge ------------------------------------------------------------------

struct RidgeModel {
    double lambda = 1.0;
    Standardizer scaler;                 ///< mean-centred for every column
    std::vector<double> weights;         ///< standardized space
    double intercept_standardized = 0.0; ///< equals mean(y)
    std::vector<double> coefficients;    ///< raw feature space
    double intercept = 0.0;              ///< raw feature space

    /// Raw linear prediction, unclamped.
    [[nodiscard]] double decision(std::span<const double> x) const;
    /// Clamped at zero.
    [[nodiscard]] double predict(std::span<const double> x) const;
};

/// Minimises ||y - b - Zw||^2 + lambda ||w||^2 with Z the standardized features.
/// Zero-variance columns get weight 0. Throws ValidationError for fewer than two
/// examples, negative lambda, or a singular system at lambda = 0.
[[nodiscard]] RidgeModel ridge_fit(std::span<const std::vector<double>> x, std::span<const double> y,
                                   double lambda);

// --- random forest ----------------------------------------------------------

struct ForestParams {
    int n_trees = 100;
    int max_depth = 12;
    int min_leaf = 5;
    double feature_frac = 1.0 / 3.0;
    std::uint64_t seed = 0;
};

struct TreeNode {
    int feature = -1;  ///< -1 marks a leaf
    double threshold = 0.0;  ///< go left when x[feature] <= threshold
    int left = -1;
    int right = -1;
    double value = 0.0;
};

struct RegressionTree {
    std::vector<TreeNode> nodes;

    [[nodiscard]] double predict(std::span<const double> x) const;
    [[nodiscard]] int depth() const;
};

struct ForestModel {
    ForestParams params;
    std::size_t dim = 0;
    std::vector<RegressionTree> trees;

    [[nodiscard]] double mean_prediction(std::span<const double> x) const;
    [[nodiscard]] double predict(std::span<const double> x) const;  ///< clamped at zero
};

/// Bootstrap-sampled CART trees with variance-reduction splits. Tree t draws its
/// bootstrap and feature subsets from derive_seed(seed, t).
[[nodiscard]] RegressionTree fit_tree(std::span<const std::vector<double>> x, std::span<const double> y,
                                      std::span<const std::size_t> sample, const ForestParams& params,
                                      Rng& rng);
[[nodiscard]] ForestModel forest_fit(std::span<const std::vector<double>> x, std::span<const double> y,
                                     const ForestParams& params);

// --- unified model ----------------------------------------------------------

struct ProjectionConfig {
    ModelKind kind = ModelKind::Knn;
    KnnParams knn;
    double lambda = 1.0;
    ForestParams forest;
    int k_folds = 5;
};

/// Model trained for a single innings.
struct ProjectionModel {
    ModelKind kind = ModelKind::Knn;
    int innings = 1;
    KnnParams knn_params;
    std::variant<KnnStore, RidgeModel, ForestModel> state;

    /// R(S) for one stage of `match_id`. kNN excludes that match when leave-one-out is set.
    [[nodiscard]] double predict(const TrainingExample& query) const;
};

[[nodiscard]] ProjectionModel fit_projection(std::vector<TrainingExample> examples, int innings,
                                             const ProjectionConfig& config, std::uint64_t seed);

/// R(S_1..S_{n+1}) for one innings; the terminal value is 0.
[[nodiscard]] std::vector<double> project_innings(const Match& match, int innings,
                                                  const ClusterAssignments& clusters,
                                                  const ProjectionModel& model);

/// Deterministic match-grouped fold labels: match ids are shuffled with `seed`
/// and dealt round-robin into k folds.
[[nodiscard]] std::map<MatchId, int> assign_folds(std::span<const TrainingExample> examples, int k_folds,
                                                  std::uint64_t seed);

/// Out-of-sample prediction for every example: leave-one-match-out for kNN,
/// match-grouped k-fold for ridge and forest.
[[nodiscard]] std::vector<double> cross_fit_predictions(std::span<const TrainingExample> examples,
                                                        const ProjectionConfig& config,
                                                        std::uint64_t seed);

struct ProjectionTrace {
    MatchId match_id;
    int innings = 1;
    int boundary = 1;
    int runs_so_far = 0;
    double predicted = 0.0;
    double actual = 0.0;
};

/// Per-over absolute-error summary indexed by over 1..50 (the stage at the start of that over).
struct MaeCurve {
    std::string model;
    int innings = 1;
    std::array<std::optional<double>, kOversPerInnings> mae{};
    std::array<std::size_t, kOversPerInnings> n{};
};

[[nodiscard]] MaeCurve mae_curve(std::string model, int innings, std::span<const TrainingExample> examples,
                                 std::span<const double> predictions);

struct ProjectionReport {
    std::vector<MaeCurve> curves;
    std::vector<ProjectionTrace> traces;
};

[[nodiscard]] ProjectionReport kfold_evaluate(std::span<const TrainingExample> examples,
                                              const ProjectionConfig& config, std::uint64_t seed);

/// Header model,innings,over,mae,n; absent entries leave mae empty.
[[nodiscard]] std::string mae_csv(std::span<const MaeCurve> curves);

/// Boundary-level projections: match_id,innings,boundary,runs_so_far,projected_remaining,actual_remaining.
/// Terminal boundaries are included with projected 0.
[[nodiscard]] std::string traces_csv(std::span<const ProjectionTrace> traces);
[[nodiscard]] std::vector<ProjectionTrace> parse_traces(std::istream& in, const std::string& source);

/// R traces keyed by (match, innings), for the scoring module.
using TraceTable = std::map<std::pair<MatchId, int>, std::vector<double>>;
/// Groups traces and checks that each innings covers boundaries 1..n+1 contiguously.
[[nodiscard]] TraceTable to_trace_table(std::span<const ProjectionTrace> traces);

/// Traces for every innings of `matches` built from out-of-sample predictions.
[[nodiscard]] std::vector<ProjectionTrace> cross_fit_traces(std::span<const Match> matches,
                                                            const ClusterAssignments& clusters,
                                                            const ProjectionConfig& config,
                                                            std::uint64_t seed);

void to_json(nlohmann::json& j, const RidgeModel& m);
void from_json(const nlohmann::json& j, RidgeModel& m);
void to_json(nlohmann::json& j, const ForestModel& m);
void from_json(const nlohmann::json& j, ForestModel& m);

}  // namespace camp
