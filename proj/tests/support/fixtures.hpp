#pragma once

#include <optional>
#include <string>
#include <vector>

#include "camp/ingest.hpp"
#include "camp/lnc.hpp"
#include "camp/synthetic.hpp"

namespace camp::test {

/// One delivery, from the batting side's point of view.
struct Ball {
    int bat = 0;
    ExtrasKind extra = ExtrasKind::None;
    int extra_runs = 0;
    std::optional<DismissalKind> out;
    bool non_striker_out = false;

    static Ball runs(int r) { return {r, ExtrasKind::None, 0, std::nullopt, false}; }
    static Ball wide(int n = 1) { return {0, ExtrasKind::Wide, n, std::nullopt, false}; }
    static Ball no_ball(int bat_runs = 0) { return {bat_runs, ExtrasKind::NoBall, 1, std::nullopt, false}; }
    static Ball bye(int n) { return {0, ExtrasKind::Bye, n, std::nullopt, false}; }
    static Ball leg_bye(int n) { return {0, ExtrasKind::LegBye, n, std::nullopt, false}; }
    static Ball wicket(DismissalKind k = DismissalKind::Bowled) { return {0, ExtrasKind::None, 0, k, false}; }
    static Ball run_out(int completed, bool non_striker = false) {
        return {completed, ExtrasKind::None, 0, DismissalKind::RunOut, non_striker};
    }
};

/// Builds a valid two-innings match ball by ball. Team A bats first with
/// players A01..A11, team B second with B01..B11; bowlers are fielders by
/// 1-based lineup index. Strike rotates on odd runs and at the end of each over.
class MatchBuilder {
public:
    explicit MatchBuilder(MatchId id = "M1", TeamId a = "AAA", TeamId b = "BBB",
                          VenueClass venue = VenueClass::NonAsia);

    /// Appends one over to `innings`. The innings' next over index is used.
    MatchBuilder& over(int innings, int bowler, const std::vector<Ball>& balls);
    /// `n` overs of six identical legal balls, bowlers rotating over fielders 7..11.
    MatchBuilder& overs(int innings, int n, Ball each);
    MatchBuilder& mom(PlayerId p);

    [[nodiscard]] const std::string& player(int innings_batting, int index) const;
    [[nodiscard]] std::vector<BallEvent> balls() const { return balls_; }
    [[nodiscard]] MatchSummary summary() const;
    [[nodiscard]] LineupTable lineups() const;
    [[nodiscard]] int total(int innings) const { return state_[innings - 1].runs; }

    /// Runs the result through assemble_matches; throws if it was rejected.
    [[nodiscard]] Match build() const;

private:
    struct InningsState {
        int runs = 0;
        int wickets = 0;
        int next_over = 1;
        int striker = 0;
        int non_striker = 1;
        int next_in = 2;
    };

    MatchId id_;
    TeamId a_;
    TeamId b_;
    VenueClass venue_;
    std::vector<PlayerId> lineup_a_;
    std::vector<PlayerId> lineup_b_;
    std::vector<BallEvent> balls_;
    InningsState state_[2];
    PlayerId mom_;
    int bowler_cycle_ = 0;
};

/// Full 50-over first innings of singles (300) and a chase of 301 in 50 overs
/// ending with a four; no extras, no wickets.
[[nodiscard]] Match singles_match(MatchId id = "M1");

/// 35 in 50 overs with seven in each of overs 10, 20, 30, 40, 50 (a six, four
/// dots, a single, all to one batter); chased with six sixes off one over.
[[nodiscard]] Match step_match(MatchId id = "M1");

/// Resource 20 * ceil(overs_left / 10), flat across wickets. With a par of 35
/// every over of step_match meets its LNC expectation exactly.
[[nodiscard]] ResourceTable step_resource_table();

/// R at every boundary equal to the runs actually still to come.
[[nodiscard]] std::vector<double> oracle_trace(const Match& m, int innings);

/// Ingests generator output into matches, with no preprocessing.
[[nodiscard]] std::vector<Match> assemble(const GeneratedData& data);

/// Small synthetic league: generate, assemble, return.
[[nodiscard]] std::vector<Match> synthetic_matches(int n, std::uint64_t seed);

}  // namespace camp::test
