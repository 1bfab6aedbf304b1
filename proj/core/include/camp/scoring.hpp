#pragma once

#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "camp/ingest.hpp"
#include "camp/projection.hpp"

namespace camp {

struct ScoringParams {
    double w = 1.0;       ///< wicket weight, in [0.1, 1]
    double w_bat = 1.0;
    double w_bowl = 0.2;
    /// Byes and leg-byes count as runs conceded by the bowler.
    bool byes_against_bowler = true;
    /// A final over cut short (chase won, side all out) carries expectation
    /// pro rata to the legal balls actually bowled.
    bool scale_final_partial_over = true;

    void validate() const;
};

[[nodiscard]] double camp_score(double c_bat, double c_bowl, const ScoringParams& params) noexcept;

struct OverExpectation {
    int over_index = 1;
    double e = 0.0;        ///< R(S_i) - R(S_{i+1})
    double e_prime = 0.0;  ///< e * (1 - w)^m
    int wickets = 0;
    double scale = 1.0;    ///< legal balls / 6 for a short final over, else 1

    [[nodiscard]] double per_ball() const noexcept { return e_prime / kBallsPerOver; }
    [[nodiscard]] double over_expectation() const noexcept { return e_prime * scale; }
};

/// `r` holds R at boundaries 1..n+1 for the n overs in `overs`.
[[nodiscard]] std::vector<OverExpectation> expected_runs(std::span<const double> r,
                                                         std::span<const OverRecord> overs,
                                                         const ScoringParams& params);

struct BatterContribution {
    PlayerId player;
    double c = 0.0;
};

/// r_p - (e'/6) * b_p for everyone at the crease who faced a legal ball, scored,
/// or was dismissed in the over.
[[nodiscard]] std::vector<BatterContribution> batter_contribution(const OverRecord& over,
                                                                  const OverExpectation& exp);

/// e' (scaled) minus runs conceded in the over.
[[nodiscard]] double bowler_contribution(const OverRecord& over, const OverExpectation& exp,
                                         const ScoringParams& params);

struct LedgerEntry {
    int innings = 1;
    int over_index = 1;
    double value = 0.0;
};

struct DismissalEntry {
    int innings = 1;
    int over_index = 1;
    PlayerId batter;
    DismissalKind kind = DismissalKind::Bowled;
    std::optional<PlayerId> credited_bowler;
    double e = 0.0;  ///< unadjusted expectation of the over
};

struct ContributionLedger {
    std::map<PlayerId, std::vector<LedgerEntry>> batting;
    std::map<PlayerId, std::vector<LedgerEntry>> bowling;
    std::vector<DismissalEntry> dismissals;
    std::array<int, 2> overs_per_innings{};
    /// Every over's expectation, for audit.
    std::array<std::vector<OverExpectation>, 2> expectations;
};

[[nodiscard]] ContributionLedger build_ledger(const Match& match, std::span<const double> r_innings1,
                                              std::span<const double> r_innings2, const ScoringParams& params);

struct PlayerRating {
    PlayerId player;
    TeamId team;
    double c_bat = 0.0;
    double c_bowl = 0.0;
    double camp_score = 0.0;
    std::optional<int> rank_winning11;
    int rank_all22 = 0;
};

struct RatingReport {
    MatchId match_id;
    TeamId winner;
    std::string method = "camp";
    ScoringParams params;
    std::vector<PlayerRating> rows;  ///< ordered by rank_all22

    [[nodiscard]] const PlayerRating& row(const PlayerId& p) const;
};

/// Descending CAMP score, then higher batting contribution, then player id.
[[nodiscard]] bool rank_before(const PlayerRating& a, const PlayerRating& b) noexcept;

/// Assigns both rank columns and sorts rows by rank_all22.
void assign_ranks(RatingReport& report);

[[nodiscard]] RatingReport aggregate_match(const Match& match, const ContributionLedger& ledger,
                                           const ScoringParams& params);

/// Contribution pipeline for any projection source.
[[nodiscard]] RatingReport rate_match(const Match& match, std::span<const double> r_innings1,
                                      std::span<const double> r_innings2, const ScoringParams& params,
                                      std::string method = "camp");

/// Projects both innings with trained models, then rates.
[[nodiscard]] RatingReport camp_rate_match(const Match& match, const ClusterAssignments& clusters,
                                           const ProjectionModel& innings1, const ProjectionModel& innings2,
                                           const ScoringParams& params);

[[nodiscard]] RatingReport rate_from_traces(const Match& match, const TraceTable& traces,
                                            const ScoringParams& params, std::string method = "camp");

[[nodiscard]] const std::vector<std::string>& rating_csv_header();
[[nodiscard]] std::string ratings_csv(std::span<const RatingReport> reports);
/// Reads ratings back grouped by match in file order; params are left at defaults.
[[nodiscard]] std::vector<RatingReport> parse_ratings(std::istream& in, const std::string& source);

struct SeriesRow {
    PlayerId player;
    TeamId team;
    int matches = 0;
    double c_bat = 0.0;
    double c_bowl = 0.0;
    double camp_score = 0.0;
    int rank = 0;
};

[[nodiscard]] std::vector<SeriesRow> aggregate_series(std::span<const RatingReport> reports);
[[nodiscard]] std::string series_csv(std::span<const SeriesRow> rows);

}  // namespace camp
