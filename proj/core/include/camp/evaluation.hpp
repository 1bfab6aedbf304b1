#pragma once

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "camp/ingest.hpp"
#include "camp/projection.hpp"
#include "camp/scoring.hpp"

namespace camp {

struct AgreementCounts {
    std::size_t n = 0;
    std::size_t rank1 = 0;
    std::size_t top2 = 0;
    std::size_t top3 = 0;

    [[nodiscard]] double fraction(std::size_t count) const noexcept {
        return n == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(n);
    }
};

struct AgreementReport {
    std::string method;
    std::size_t n_matches = 0;
    /// A MoM from the losing side never counts as agreement in this pool.
    AgreementCounts winning11;
    AgreementCounts all22;
};

/// How often the MoM sits at rank 1, within the top 2 and within the top 3.
/// Throws ValidationError if a report has no summary or the MoM is missing from it.
[[nodiscard]] AgreementReport mom_agreement(std::span<const RatingReport> reports,
                                            std::span<const MatchSummary> summaries,
                                            std::string method = "camp");

void to_json(nlohmann::json& j, const AgreementReport& r);

struct ComparisonRow {
    MatchId match_id;
    PlayerId player;
    TeamId team;
    double score_a = 0.0;
    double score_b = 0.0;
    int rank_all22_a = 0;
    int rank_all22_b = 0;
    std::optional<int> rank_winning11_a;
    std::optional<int> rank_winning11_b;
};

struct MethodComparison {
    std::string method_a;
    std::string method_b;
    std::vector<ComparisonRow> rows;  ///< report order, then rank_all22 of method a
};

/// Joins two report sets over the same matches and players.
[[nodiscard]] MethodComparison compare_methods(std::span<const RatingReport> a, std::span<const RatingReport> b,
                                               std::string method_a = "camp", std::string method_b = "lnc");
[[nodiscard]] std::string comparison_csv(const MethodComparison& c);

/// Curves for several models plus summary JSON {model, innings, mean_mae, n}.
[[nodiscard]] std::string mae_summary_json(std::span<const MaeCurve> curves);

struct VenueScore {
    int innings = 1;
    VenueClass venue = VenueClass::NonAsia;
    MatchId match_id;
    int total = 0;
    double ecdf = 0.0;  ///< fraction of this (innings, venue) group scoring <= total
};

struct KsResult {
    int innings = 1;
    std::size_t n_asia = 0;
    std::size_t n_non_asia = 0;
    std::optional<double> statistic;  ///< absent when either group is empty
};

struct VenueDistributions {
    std::vector<VenueScore> scores;  ///< sorted by innings, venue, total, match id
    std::vector<KsResult> ks;        ///< one per innings
};

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
[[nodiscard]] double ks_statistic(std::vector<double> a, std::vector<double> b);

[[nodiscard]] VenueDistributions export_venue_distributions(std::span<const Match> matches);
[[nodiscard]] std::string venue_scores_csv(const VenueDistributions& d);
[[nodiscard]] std::string venue_ks_csv(const VenueDistributions& d);

}  // namespace camp
