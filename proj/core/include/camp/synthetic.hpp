#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "camp/ingest.hpp"

namespace camp {

/// Batting and bowling strength of one team tier.
struct TierProfile {
    double runs_per_over = 5.0;   ///< expected runs off six legal balls (bat plus byes), before dismissals
    double wicket_hazard = 0.025; ///< dismissal probability per legal ball
    double bowling_economy = 1.0; ///< multiplier on the opposition's scoring rate
    double bowling_hazard = 1.0;  ///< multiplier on the opposition's wicket hazard
};

struct GeneratorConfig {
    std::uint64_t seed = 42;
    int n_matches = 120;
    int overs_per_innings = kOversPerInnings;
    /// Teams T01..T10: the first three use tier 0, the next four tier 1, the rest tier 2.
    std::array<TierProfile, 3> tiers{TierProfile{5.6, 0.021, 0.93, 1.10}, TierProfile{5.1, 0.024, 1.0, 1.0},
                                     TierProfile{4.6, 0.028, 1.07, 0.90}};
    double asia_fraction = 0.4;
    double asia_run_factor = 0.95;
    /// Per-phase multipliers for overs 1-10, 11-40 and 41-50; the default averages to 1.
    std::array<double, 3> phase_factor{1.0, 0.9, 1.3};
    /// Log-normal spread of individual player skill around their archetype.
    double skill_spread = 0.15;
    bool archetypes = true;  ///< top/middle/tail batting profiles and five front-line bowlers
    double wide_prob = 0.02;
    double no_ball_prob = 0.005;
    double bye_prob = 0.008;
    double leg_bye_prob = 0.012;
    double run_out_share = 0.07;  ///< fraction of dismissals that are run-outs

    void validate() const;
};

struct TruthRow {
    MatchId match_id;
    int innings = 1;
    int over_index = 1;
    double expected_runs = 0.0;  ///< generator's expected runs summed over the over's deliveries
};

struct GeneratedData {
    std::vector<BallEvent> balls;
    std::vector<MatchSummary> summaries;
    LineupTable lineups;
    std::vector<std::pair<MatchId, std::array<TeamId, 2>>> lineup_order;  ///< bat-first team first
    std::vector<TruthRow> truth;
};

[[nodiscard]] std::vector<TeamId> synthetic_teams();

/// Deterministic per seed. Match m draws from derive_seed(seed, m).
[[nodiscard]] GeneratedData generate(const GeneratorConfig& config);

[[nodiscard]] std::string lineups_csv(const GeneratedData& data);
[[nodiscard]] std::string truth_csv(std::span<const TruthRow> rows);

}  // namespace camp
