#pragma once

#include <array>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "camp/common.hpp"

namespace camp {

enum class ExtrasKind { None, Wide, NoBall, Bye, LegBye };

enum class DismissalKind { Bowled, Caught, Lbw, Stumped, HitWicket, RunOut, ObstructingField };

[[nodiscard]] std::string_view to_string(ExtrasKind k) noexcept;
[[nodiscard]] std::optional<ExtrasKind> parse_extras_kind(std::string_view s) noexcept;
[[nodiscard]] std::string_view to_string(DismissalKind k) noexcept;
[[nodiscard]] std::optional<DismissalKind> parse_dismissal_kind(std::string_view s) noexcept;

/// Run-outs and obstruction are debited to the batter but never credited to the bowler.
[[nodiscard]] constexpr bool credited_to_bowler(DismissalKind k) noexcept {
    return k != DismissalKind::RunOut && k != DismissalKind::ObstructingField;
}

struct Dismissal {
    DismissalKind kind = DismissalKind::Bowled;
    PlayerId player_out;

    friend bool operator==(const Dismissal&, const Dismissal&) = default;
};

struct BallEvent {
    MatchId match_id;
    int innings = 1;
    int over_index = 1;
    int ball_in_over = 1;
    PlayerId striker;
    PlayerId non_striker;
    PlayerId bowler;
    int runs_off_bat = 0;
    int extras_runs = 0;
    ExtrasKind extras_kind = ExtrasKind::None;
    bool legal_delivery = true;
    std::optional<Dismissal> dismissal;

    [[nodiscard]] int total_runs() const noexcept { return runs_off_bat + extras_runs; }

    friend bool operator==(const BallEvent&, const BallEvent&) = default;
};

/// Throws ValidationError naming the offending field.
void validate(const BallEvent& ball);

/// Runs and legal balls one batter accumulated inside one over.
struct BatterOverLine {
    PlayerId player;
    int runs = 0;        ///< off the bat only
    int balls = 0;       ///< legal deliveries faced
    int boundaries = 0;  ///< 4s and 6s off the bat
};

struct WicketEvent {
    DismissalKind kind = DismissalKind::Bowled;
    PlayerId player_out;
    bool bowler_credited = true;
};

struct OverRecord {
    MatchId match_id;
    int innings = 1;
    int over_index = 1;
    int runs_total = 0;        ///< r_i: off the bat plus every extra
    int extras_total = 0;
    int bye_runs = 0;          ///< byes and leg-byes, a subset of extras_total
    int legal_deliveries = 0;
    int ball_count = 0;        ///< BallEvents folded into this record
    /// Everyone at the crease during the over, first-appearance order; a
    /// non-striker who never faced has a zero line.
    std::vector<BatterOverLine> batters;
    std::vector<WicketEvent> wickets;
    PlayerId bowler;
    bool short_over = false;   ///< fewer than six legal balls and not the innings' last over

    [[nodiscard]] const BatterOverLine* batter(const PlayerId& id) const noexcept;
    [[nodiscard]] int wicket_count() const noexcept { return static_cast<int>(wickets.size()); }
};

struct InningsTotal {
    int runs = 0;
    int wickets = 0;
};

struct MatchSummary {
    MatchId match_id;
    TeamId team_a;
    TeamId team_b;
    VenueClass venue_class = VenueClass::NonAsia;
    TeamId innings1_team;
    TeamId innings2_team;
    std::array<InningsTotal, 2> innings_totals{};
    std::string winner;  ///< team id, or a no-result marker that ingest rejects
    PlayerId mom_player_id;
    std::string date;

    /// Raw venue_class field as written in the file (a class or a ground country).
    std::string venue_field;

    [[nodiscard]] int target_runs() const noexcept { return innings_totals[0].runs + 1; }
    [[nodiscard]] const TeamId& batting_team(int innings) const noexcept {
        return innings == 1 ? innings1_team : innings2_team;
    }
    [[nodiscard]] const TeamId& bowling_team(int innings) const noexcept {
        return innings == 1 ? innings2_team : innings1_team;
    }
    [[nodiscard]] const TeamId& opponent(const TeamId& t) const noexcept {
        return t == team_a ? team_b : team_a;
    }
};

/// ground country -> venue class
using VenueMap = std::map<std::string, VenueClass, std::less<>>;

/// match -> team -> players in batting order
using LineupTable = std::map<MatchId, std::map<TeamId, std::vector<PlayerId>>>;

/// A fully ingested match: summary, both eleven-player lineups, per-over records.
struct Match {
    MatchSummary summary;
    /// [0] bats first, [1] bats second. Batting order.
    std::array<std::vector<PlayerId>, 2> lineups;
    /// [0] first innings, [1] second innings.
    std::array<std::vector<OverRecord>, 2> overs;

    [[nodiscard]] const MatchId& id() const noexcept { return summary.match_id; }
    [[nodiscard]] const std::vector<PlayerId>& batting_lineup(int innings) const {
        return lineups.at(static_cast<std::size_t>(innings - 1));
    }
    [[nodiscard]] const std::vector<PlayerId>& bowling_lineup(int innings) const {
        return lineups.at(static_cast<std::size_t>(2 - innings));
    }
    [[nodiscard]] const std::vector<OverRecord>& innings_overs(int innings) const {
        return overs.at(static_cast<std::size_t>(innings - 1));
    }
    /// Team that `player` belongs to, or nullopt if not in either lineup.
    [[nodiscard]] std::optional<TeamId> team_of(const PlayerId& player) const;
};

// --- file formats -----------------------------------------------------------

[[nodiscard]] const std::vector<std::string>& ball_csv_header();
[[nodiscard]] const std::vector<std::string>& summary_csv_header();
[[nodiscard]] const std::vector<std::string>& lineup_csv_header();

/// Parses the ball-by-ball CSV. Row order is preserved. A row may omit the final
/// player_out field when it has no dismissal.
[[nodiscard]] std::vector<BallEvent> parse_balls(std::istream& in,
                                                 const std::string& source = "balls.csv");
[[nodiscard]] std::string serialize_balls(std::span<const BallEvent> balls);

/// The venue_class column holds either "Asia"/"NonAsia" or a ground country that
/// must be present in `venues`.
[[nodiscard]] std::vector<MatchSummary> parse_summaries(std::istream& in,
                                                        const VenueMap& venues,
                                                        const std::string& source = "matches.csv");
[[nodiscard]] std::string serialize_summaries(std::span<const MatchSummary> summaries);

[[nodiscard]] LineupTable parse_lineups(std::istream& in,
                                        const std::string& source = "lineups.csv");
[[nodiscard]] std::string serialize_lineups(std::span<const Match> matches);

/// JSON object {ground_country: "Asia"|"NonAsia"}.
[[nodiscard]] VenueMap parse_venue_map(std::string_view json_text);

// --- aggregation ------------------------------------------------------------

/// Folds one match's balls, sorted by (innings, over, ball), into one record per
/// (innings, over). Throws on unsorted input, mixed matches, or a gap in the over
/// sequence.
[[nodiscard]] std::vector<OverRecord> aggregate_overs(std::span<const BallEvent> balls);

struct Rejection {
    MatchId match_id;
    std::string reason;
};

struct AssembleResult {
    std::vector<Match> matches;        ///< in summary-file order
    std::vector<Rejection> rejected;   ///< no-result and shortened matches
    std::vector<std::string> warnings; ///< short-over flags
};

/// Joins balls, summaries and lineups into validated matches. Hard
/// inconsistencies (innings totals that disagree with the balls, players on the
/// wrong side, MoM outside both lineups) throw ValidationError; no-result and
/// non-50-over matches are rejected into the result instead.
[[nodiscard]] AssembleResult assemble_matches(std::span<const BallEvent> balls,
                                              std::span<const MatchSummary> summaries,
                                              const LineupTable& lineups);

// --- preprocessing ----------------------------------------------------------

struct PreprocessConfig {
    std::vector<TeamId> excluded_teams{"BAN", "ZIM"};
    double sigma_band = 2.0;
};

struct InningsStats {
    std::size_t count = 0;
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double std = 0.0;  ///< population standard deviation
};

/// Accepted innings-total interval per innings, inclusive.
struct FilterBand {
    std::array<double, 2> lower{};
    std::array<double, 2> upper{};
};

struct PreprocessReport {
    std::array<InningsStats, 2> before{};
    std::array<InningsStats, 2> after{};
    FilterBand band;
    std::size_t input_matches = 0;
    std::size_t removed_by_team = 0;
    std::size_t removed_by_band = 0;
    std::size_t output_matches = 0;
};

struct PreprocessResult {
    std::vector<Match> matches;
    PreprocessReport report;
};

[[nodiscard]] InningsStats innings_stats(std::span<const Match> matches, int innings);

/// Drops matches involving excluded teams, then drops matches whose innings
/// totals fall outside mean +/- sigma_band * std. The band is computed once on
/// the post-exclusion pool unless `fixed_band` is supplied, in which case that band
/// is applied as-is (repeat application is then idempotent).
[[nodiscard]] PreprocessResult preprocess_matches(std::span<const Match> matches,
                                                  const PreprocessConfig& config,
                                                  const std::optional<FilterBand>& fixed_band = {});

}  // namespace camp
