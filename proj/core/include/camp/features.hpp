#pragma once

#include <istream>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "camp/common.hpp"
#include "camp/ingest.hpp"

namespace camp {

// --- dimensions -------------------------------------------------------------

inline constexpr int kTeamsInUniverse = 10;
inline constexpr int kOpponentsPerTeam = kTeamsInUniverse - 1;
inline constexpr int kTeamClusterCount = 3;
/// venue class x opposition team cluster x innings
inline constexpr int kScenarioCount = 2 * kTeamClusterCount * 2;

inline constexpr int kTeamFeatureDim = kOpponentsPerTeam * 2 * 2 * 2;  // 72
inline constexpr int kBatterParams = 11;
inline constexpr int kBatterFeatureDim = kScenarioCount * kBatterParams;  // 132
inline constexpr int kBowlerParams = 13;
inline constexpr int kBowlerFeatureDim = kScenarioCount * kBowlerParams;  // 156

/// Lower edges of consecutive half-open bins [e_k, e_{k+1}); the last bin is open.
struct BinEdges {
    std::vector<double> lower;

    [[nodiscard]] std::size_t size() const noexcept { return lower.size(); }
    /// Bin holding `v`. Throws ValidationError when v is below the first edge.
    [[nodiscard]] std::size_t index_of(double v) const;
};

struct FeatureConfig {
    BinEdges batting_runs{{0, 10, 25, 50, 75, 100}};
    BinEdges batting_strike_rate{{0, 50, 100}};
    BinEdges bowling_average{{0, 20, 30, 40}};
    BinEdges bowling_strike_rate{{0, 25, 35, 45, 60}};
    BinEdges bowling_economy{{0, 4, 5, 6}};

    /// The bin counts are fixed by the 132/156 dimension contracts; edges may vary.
    void validate() const;
};

/// The ten-team universe, sorted by id. A team's opponent slots are the other
/// nine teams in this order.
class TeamUniverse {
public:
    explicit TeamUniverse(std::vector<TeamId> teams);
    /// Distinct teams that appear in `matches`. Throws unless there are exactly ten.
    static TeamUniverse from_matches(std::span<const Match> matches);

    [[nodiscard]] const std::vector<TeamId>& teams() const noexcept { return teams_; }
    [[nodiscard]] bool contains(const TeamId& t) const noexcept;
    /// 0-based opponent slot of `opponent` from `team`'s point of view.
    [[nodiscard]] int opponent_slot(const TeamId& team, const TeamId& opponent) const;
    [[nodiscard]] std::vector<TeamId> opponents_of(const TeamId& team) const;

private:
    std::vector<TeamId> teams_;
};

// --- team features ------------------------------------------------------------

struct TeamFeatures {
    TeamId team;
    std::vector<double> vector;      ///< kTeamFeatureDim entries
    std::vector<bool> missing_cell;  ///< per (opponent, venue, innings) cell, no qualifying match

    /// Flat index of one (opponent slot, venue, innings 1|2, param 0=avg runs|1=win prob) entry.
    [[nodiscard]] static std::size_t index(int opponent_slot, VenueClass venue, int innings, int param);
};

[[nodiscard]] TeamFeatures build_team_features(const TeamId& team, std::span<const Match> history,
                                               const TeamUniverse& universe);

// --- player innings -----------------------------------------------------------

struct BattingInnings {
    PlayerId player;
    MatchId match_id;
    VenueClass venue = VenueClass::NonAsia;
    TeamId opponent;
    int innings = 1;
    int runs = 0;
    int balls = 0;  ///< legal balls faced
    int boundaries = 0;
    bool dismissed = false;
};

struct BowlingInnings {
    PlayerId player;
    MatchId match_id;
    VenueClass venue = VenueClass::NonAsia;
    TeamId opponent;
    int innings = 1;
    int legal_balls = 0;
    int runs_conceded = 0;  ///< all runs in the bowler's overs except byes and leg-byes
    int wickets = 0;        ///< bowler-credited dismissals only
};

struct PlayerHistory {
    std::vector<BattingInnings> batting;
    std::vector<BowlingInnings> bowling;
};

/// One BattingInnings per player who came to the crease, one BowlingInnings per
/// player who bowled at least one over.
[[nodiscard]] PlayerHistory extract_player_innings(std::span<const Match> matches);

/// opposition team -> 1-based team cluster
using TeamClusterMap = std::map<TeamId, int>;

[[nodiscard]] int scenario_index(VenueClass venue, int opposition_cluster, int innings);

struct BatterFeatures {
    PlayerId player;
    std::vector<double> vector;  ///< kBatterFeatureDim entries
    bool never_batted = true;

    /// param: 0..5 runs bins, 6..8 strike-rate bins, 9 boundaries, 10 not-outs
    [[nodiscard]] static std::size_t index(int scenario, int param);
};

struct BowlerFeatures {
    PlayerId player;
    std::vector<double> vector;  ///< kBowlerFeatureDim entries
    bool never_bowled = true;

    /// param: 0..3 average bins, 4..8 strike-rate bins, 9..12 economy bins
    [[nodiscard]] static std::size_t index(int scenario, int param);
};

/// Uses only the entries of `innings` whose player is `player`.
[[nodiscard]] BatterFeatures build_batter_features(const PlayerId& player,
                                                   std::span<const BattingInnings> innings,
                                                   const TeamClusterMap& team_clusters,
                                                   const FeatureConfig& config = {});
[[nodiscard]] BowlerFeatures build_bowler_features(const PlayerId& player,
                                                   std::span<const BowlingInnings> innings,
                                                   const TeamClusterMap& team_clusters,
                                                   const FeatureConfig& config = {});

// --- canonical CSV export -----------------------------------------------------------

[[nodiscard]] std::vector<std::string> team_feature_names();
[[nodiscard]] std::vector<std::string> batter_feature_names();
[[nodiscard]] std::vector<std::string> bowler_feature_names();

[[nodiscard]] std::string team_features_csv(std::span<const TeamFeatures> rows);
[[nodiscard]] std::string batter_features_csv(std::span<const BatterFeatures> rows);
[[nodiscard]] std::string bowler_features_csv(std::span<const BowlerFeatures> rows);

/// Inverses of the exports. The header must match exactly; missing-cell masks are not stored.
[[nodiscard]] std::vector<TeamFeatures> parse_team_features(std::istream& in, const std::string& source);
[[nodiscard]] std::vector<BatterFeatures> parse_batter_features(std::istream& in, const std::string& source);
[[nodiscard]] std::vector<BowlerFeatures> parse_bowler_features(std::istream& in, const std::string& source);

// --- match stage vector -------------------------------------------------------------

/// Cluster ids consumed by the stage vector. Player clusters are 1..k with k+1
/// the dummy cluster for players without history; players absent from the map
/// are treated as dummy.
struct ClusterAssignments {
    std::map<TeamId, int> teams;
    std::map<PlayerId, int> batters;
    std::map<PlayerId, int> bowlers;
    int batter_slots = 5;  ///< k_bat + 1
    int bowler_slots = 5;  ///< k_bowl + 1

    [[nodiscard]] int team_cluster(const TeamId& t) const;
    [[nodiscard]] int batter_cluster(const PlayerId& p) const noexcept;
    [[nodiscard]] int bowler_cluster(const PlayerId& p) const noexcept;
};

/// Resource and context snapshot at the start of over `boundary` (1-based);
/// boundary n+1 is the terminal state after an n-over innings.
struct StageVector {
    int innings = 1;
    int boundary = 1;
    int overs_remaining = kOversPerInnings;
    int batting_team_cluster = 1;
    int bowling_team_cluster = 1;
    /// Not-yet-dismissed batters per batter cluster, the two at the crease included.
    std::vector<int> remaining_batters;
    /// Per bowler cluster: sum over that cluster's fielders of (10 - overs bowled).
    std::vector<int> bowling_capacity;
    int wickets_lost = 0;
    int runs_so_far = 0;
    VenueClass venue = VenueClass::NonAsia;
    /// target - runs_so_far in the second innings, 0 in the first
    int remaining_target = 0;

    /// Numeric embedding used by the projection models:
    /// [bat team cluster, bowl team cluster, remaining batters..., capacity...,
    ///  wickets lost, runs so far, venue (0 Asia / 1 NonAsia), remaining target]
    [[nodiscard]] std::vector<double> features() const;
    [[nodiscard]] static std::vector<std::string> feature_names(int batter_slots, int bowler_slots);
};

/// Builds Omega incrementally: each stage is derived from the previous one and a
/// single OverRecord.
class StageTracker {
public:
    StageTracker(const Match& match, int innings, const ClusterAssignments& clusters);

    [[nodiscard]] const StageVector& current() const noexcept { return stage_; }
    /// Folds over `over` (which must be the next over of this innings) into the state.
    void advance(const OverRecord& over);

private:
    const Match* match_;
    const ClusterAssignments* clusters_;
    const std::vector<PlayerId>* batting_;
    const std::vector<PlayerId>* bowling_;
    std::map<PlayerId, int> overs_bowled_;
    std::vector<PlayerId> dismissed_;
    int target_ = 0;
    StageVector stage_;

    void recompute_counts();
};

/// Stages at boundaries 1..n+1 for an innings of n overs.
[[nodiscard]] std::vector<StageVector> build_stage_vectors(const Match& match, int innings,
                                                           const ClusterAssignments& clusters);

/// Single stage at `boundary`. Throws ValidationError beyond the innings end.
[[nodiscard]] StageVector build_stage_vector(const Match& match, int innings, int boundary,
                                             const ClusterAssignments& clusters);

}  // namespace camp
