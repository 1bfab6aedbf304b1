#include "camp/features.hpp"

#include <algorithm>
#include <set>

#include "camp/csv.hpp"

namespace camp {

std::size_t BinEdges::index_of(double v) const {
    if (lower.empty() || v < lower.front()) {
        throw ValidationError("value " + format_double(v) + " below the first bin edge");
    }
    auto it = std::upper_bound(lower.begin(), lower.end(), v);
    return static_cast<std::size_t>(std::distance(lower.begin(), it)) - 1;
}

void FeatureConfig::validate() const {
    auto check = [](const BinEdges& e, std::size_t n, const char* name) {
        if (e.size() != n) {
            throw ValidationError(std::string("bin edges '") + name + "' must have " + std::to_string(n) +
                                  " entries, got " + std::to_string(e.size()));
        }
        if (!std::is_sorted(e.lower.begin(), e.lower.end()) ||
            std::adjacent_find(e.lower.begin(), e.lower.end()) != e.lower.end()) {
            throw ValidationError(std::string("bin edges '") + name + "' must be strictly increasing");
        }
    };
    check(batting_runs, 6, "batting_runs");
    check(batting_strike_rate, 3, "batting_strike_rate");
    check(bowling_average, 4, "bowling_average");
    check(bowling_strike_rate, 5, "bowling_strike_rate");
    check(bowling_economy, 4, "bowling_economy");
}

// --- universe ---------------------------------------------------------------

TeamUniverse::TeamUniverse(std::vector<TeamId> teams) : teams_(std::move(teams)) {
    std::sort(teams_.begin(), teams_.end());
    teams_.erase(std::unique(teams_.begin(), teams_.end()), teams_.end());
    if (teams_.size() != static_cast<std::size_t>(kTeamsInUniverse)) {
        throw ValidationError("team universe must contain exactly 10 teams, got " +
                              std::to_string(teams_.size()));
    }
}

TeamUniverse TeamUniverse::from_matches(std::span<const Match> matches) {
    std::set<TeamId> teams;
    for (const auto& m : matches) {
        teams.insert(m.summary.team_a);
        teams.insert(m.summary.team_b);
    }
    return TeamUniverse({teams.begin(), teams.end()});
}

bool TeamUniverse::contains(const TeamId& t) const noexcept {
    return std::binary_search(teams_.begin(), teams_.end(), t);
}

int TeamUniverse::opponent_slot(const TeamId& team, const TeamId& opponent) const {
    if (!contains(team)) throw ValidationError("unknown team '" + team + "'");
    if (!contains(opponent)) throw ValidationError("unknown team '" + opponent + "'");
    if (team == opponent) throw ValidationError("team '" + team + "' cannot oppose itself");
    const auto self = std::lower_bound(teams_.begin(), teams_.end(), team) - teams_.begin();
    const auto opp = std::lower_bound(teams_.begin(), teams_.end(), opponent) - teams_.begin();
    return static_cast<int>(opp < self ? opp : opp - 1);
}

std::vector<TeamId> TeamUniverse::opponents_of(const TeamId& team) const {
    std::vector<TeamId> out;
    for (const auto& t : teams_)
        if (t != team) out.push_back(t);
    return out;
}

// --- team features ------------------------------------------------------------

std::size_t TeamFeatures::index(int opponent_slot, VenueClass venue, int innings, int param) {
    return static_cast<std::size_t>(((opponent_slot * 2 + static_cast<int>(venue)) * 2 + (innings - 1)) * 2 + param);
}

TeamFeatures build_team_features(const TeamId& team, std::span<const Match> history,
                                 const TeamUniverse& universe) {
    if (!universe.contains(team)) throw ValidationError("build_team_features: unknown team '" + team + "'");
    constexpr int kCells = kTeamFeatureDim / 2;
    std::vector<double> runs(kCells, 0.0);
    std::vector<int> wins(kCells, 0);
    std::vector<int> count(kCells, 0);
    int total = 0;
    for (const auto& m : history) {
        const auto& s = m.summary;
        if (s.team_a != team && s.team_b != team) continue;
        const int innings = s.innings1_team == team ? 1 : 2;
        const int slot = universe.opponent_slot(team, s.opponent(team));
        const auto cell = TeamFeatures::index(slot, s.venue_class, innings, 0) / 2;
        runs[cell] += s.innings_totals[static_cast<std::size_t>(innings - 1)].runs;
        wins[cell] += s.winner == team ? 1 : 0;
        count[cell] += 1;
        ++total;
    }
    if (total == 0) throw ValidationError("build_team_features: no history for team '" + team + "'");

    TeamFeatures out;
    out.team = team;
    out.vector.assign(kTeamFeatureDim, 0.0);
    out.missing_cell.assign(kCells, false);
    for (int c = 0; c < kCells; ++c) {
        if (count[c] == 0) {
            out.missing_cell[c] = true;
            continue;
        }
        out.vector[2 * c] = runs[c] / count[c];
        out.vector[2 * c + 1] = static_cast<double>(wins[c]) / count[c];
    }
    return out;
}

// --- player innings -----------------------------------------------------------

PlayerHistory extract_player_innings(std::span<const Match> matches) {
    PlayerHistory h;
    for (const auto& m : matches) {
        const auto& s = m.summary;
        for (int inn = 1; inn <= 2; ++inn) {
            const auto& overs = m.innings_overs(inn);
            for (const auto& p : m.batting_lineup(inn)) {
                BattingInnings bi{p, s.match_id, s.venue_class, s.bowling_team(inn), inn, 0, 0, 0, false};
                bool appeared = false;
                for (const auto& o : overs) {
                    if (const auto* line = o.batter(p)) {
                        appeared = true;
                        bi.runs += line->runs;
                        bi.balls += line->balls;
                        bi.boundaries += line->boundaries;
                    }
                    for (const auto& w : o.wickets)
                        if (w.player_out == p) bi.dismissed = true;
                }
                if (appeared) h.batting.push_back(std::move(bi));
            }
            for (const auto& p : m.bowling_lineup(inn)) {
                BowlingInnings bo{p, s.match_id, s.venue_class, s.batting_team(inn), inn, 0, 0, 0};
                bool bowled = false;
                for (const auto& o : overs) {
                    if (o.bowler != p) continue;
                    bowled = true;
                    bo.legal_balls += o.legal_deliveries;
                    bo.runs_conceded += o.runs_total - o.bye_runs;
                    for (const auto& w : o.wickets)
                        if (w.bowler_credited) ++bo.wickets;
                }
                if (bowled) h.bowling.push_back(std::move(bo));
            }
        }
    }
    return h;
}

int scenario_index(VenueClass venue, int opposition_cluster, int innings) {
    if (opposition_cluster < 1 || opposition_cluster > kTeamClusterCount) {
        throw ValidationError("opposition cluster " + std::to_string(opposition_cluster) + " outside 1..3");
    }
    if (innings != 1 && innings != 2) throw ValidationError("innings must be 1 or 2");
    return (static_cast<int>(venue) * kTeamClusterCount + (opposition_cluster - 1)) * 2 + (innings - 1);
}

std::size_t BatterFeatures::index(int scenario, int param) {
    return static_cast<std::size_t>(scenario * kBatterParams + param);
}

std::size_t BowlerFeatures::index(int scenario, int param) {
    return static_cast<std::size_t>(scenario * kBowlerParams + param);
}

namespace {

int opposition_cluster(const TeamClusterMap& clusters, const TeamId& opponent) {
    auto it = clusters.find(opponent);
    if (it == clusters.end()) throw ValidationError("opponent '" + opponent + "' has no team cluster");
    return it->second;
}

}  // namespace

BatterFeatures build_batter_features(const PlayerId& player, std::span<const BattingInnings> innings,
                                     const TeamClusterMap& team_clusters, const FeatureConfig& config) {
    config.validate();
    BatterFeatures out;
    out.player = player;
    out.vector.assign(kBatterFeatureDim, 0.0);
    const int runs_bins = static_cast<int>(config.batting_runs.size());
    for (const auto& bi : innings) {
        if (bi.player != player) continue;
        out.never_batted = false;
        const int sc = scenario_index(bi.venue, opposition_cluster(team_clusters, bi.opponent), bi.innings);
        out.vector[BatterFeatures::index(sc, static_cast<int>(config.batting_runs.index_of(bi.runs)))] += 1;
        if (bi.balls > 0) {
            const double sr = 100.0 * bi.runs / bi.balls;
            const int bin = runs_bins + static_cast<int>(config.batting_strike_rate.index_of(sr));
            out.vector[BatterFeatures::index(sc, bin)] += 1;
        }
        out.vector[BatterFeatures::index(sc, 9)] += bi.boundaries;
        if (!bi.dismissed) out.vector[BatterFeatures::index(sc, 10)] += 1;
    }
    return out;
}

BowlerFeatures build_bowler_features(const PlayerId& player, std::span<const BowlingInnings> innings,
                                     const TeamClusterMap& team_clusters, const FeatureConfig& config) {
    config.validate();
    BowlerFeatures out;
    out.player = player;
    out.vector.assign(kBowlerFeatureDim, 0.0);
    constexpr int kSrOffset = 4;
    constexpr int kEconOffset = 9;
    for (const auto& bo : innings) {
        if (bo.player != player) continue;
        out.never_bowled = false;
        const int sc = scenario_index(bo.venue, opposition_cluster(team_clusters, bo.opponent), bo.innings);
        if (bo.wickets > 0) {
            const double avg = static_cast<double>(bo.runs_conceded) / bo.wickets;
            const double sr = static_cast<double>(bo.legal_balls) / bo.wickets;
            out.vector[BowlerFeatures::index(sc, static_cast<int>(config.bowling_average.index_of(avg)))] += 1;
            out.vector[BowlerFeatures::index(
                sc, kSrOffset + static_cast<int>(config.bowling_strike_rate.index_of(sr)))] += 1;
        }
        if (bo.legal_balls > 0) {
            const double econ = bo.runs_conceded / (bo.legal_balls / 6.0);
            out.vector[BowlerFeatures::index(
                sc, kEconOffset + static_cast<int>(config.bowling_economy.index_of(econ)))] += 1;
        }
    }
    return out;
}

// --- names and CSV --------------------------------------------------------------------

namespace {

std::string scenario_name(int sc) {
    const int inn = sc % 2 + 1;
    const int cluster = (sc / 2) % kTeamClusterCount + 1;
    const auto venue = static_cast<VenueClass>(sc / (2 * kTeamClusterCount));
    return std::string(to_string(venue)) + "_c" + std::to_string(cluster) + "_inn" + std::to_string(inn);
}

template <typename Row>
std::string features_csv(std::span<const Row> rows, const std::vector<std::string>& names,
                         const char* id_col, const char* flag_col,
                         auto id_of, auto flag_of) {
    std::vector<std::string> header{id_col};
    if (flag_col) header.emplace_back(flag_col);
    header.insert(header.end(), names.begin(), names.end());
    std::string out = csv::join(header) + "\n";
    for (const auto& r : rows) {
        std::vector<std::string> f{id_of(r)};
        if (flag_col) f.push_back(flag_of(r) ? "true" : "false");
        for (double v : r.vector) f.push_back(format_double(v));
        out += csv::join(f) + "\n";
    }
    return out;
}

}  // namespace

std::vector<std::string> team_feature_names() {
    std::vector<std::string> names(kTeamFeatureDim);
    for (int slot = 0; slot < kOpponentsPerTeam; ++slot)
        for (auto venue : {VenueClass::Asia, VenueClass::NonAsia})
            for (int inn = 1; inn <= 2; ++inn) {
                const std::string base = "opp" + std::to_string(slot + 1) + "_" +
                                         std::string(to_string(venue)) + "_inn" + std::to_string(inn);
                names[TeamFeatures::index(slot, venue, inn, 0)] = base + "_avg_runs";
                names[TeamFeatures::index(slot, venue, inn, 1)] = base + "_win_prob";
            }
    return names;
}

std::vector<std::string> batter_feature_names() {
    static const std::array<const char*, kBatterParams> params{
        "runs_b1", "runs_b2", "runs_b3", "runs_b4", "runs_b5", "runs_b6",
        "sr_b1",   "sr_b2",   "sr_b3",   "boundaries", "not_outs"};
    std::vector<std::string> names;
    for (int sc = 0; sc < kScenarioCount; ++sc)
        for (auto* p : params) names.push_back(scenario_name(sc) + "_" + p);
    return names;
}

std::vector<std::string> bowler_feature_names() {
    static const std::array<const char*, kBowlerParams> params{
        "avg_b1", "avg_b2", "avg_b3", "avg_b4", "sr_b1",   "sr_b2",  "sr_b3",
        "sr_b4",  "sr_b5",  "econ_b1", "econ_b2", "econ_b3", "econ_b4"};
    std::vector<std::string> names;
    for (int sc = 0; sc < kScenarioCount; ++sc)
        for (auto* p : params) names.push_back(scenario_name(sc) + "_" + p);
    return names;
}

std::string team_features_csv(std::span<const TeamFeatures> rows) {
    return features_csv(rows, team_feature_names(), "team", nullptr,
                        [](const TeamFeatures& r) { return r.team; }, [](const TeamFeatures&) { return false; });
}

std::string batter_features_csv(std::span<const BatterFeatures> rows) {
    return features_csv(rows, batter_feature_names(), "player", "never_batted",
                        [](const BatterFeatures& r) { return r.player; },
                        [](const BatterFeatures& r) { return r.never_batted; });
}

std::string bowler_features_csv(std::span<const BowlerFeatures> rows) {
    return features_csv(rows, bowler_feature_names(), "player", "never_bowled",
                        [](const BowlerFeatures& r) { return r.player; },
                        [](const BowlerFeatures& r) { return r.never_bowled; });
}

namespace {

struct ParsedRow {
    std::string id;
    bool flag = false;
    std::vector<double> values;
};

std::vector<ParsedRow> parse_features(std::istream& in, const std::string& source, const std::vector<std::string>& names,
                                      const char* id_col, const char* flag_col) {
    std::vector<std::string> header{id_col};
    if (flag_col) header.emplace_back(flag_col);
    header.insert(header.end(), names.begin(), names.end());
    const std::size_t offset = flag_col ? 2 : 1;
    std::vector<ParsedRow> out;
    for (const auto& row : csv::read(in, source, header)) {
        ParsedRow r;
        r.id = row.fields[0];
        if (flag_col) {
            const auto& f = row.fields[1];
            if (f != "true" && f != "false") throw ParseError(source, row.line, std::string(flag_col) + " must be true or false");
            r.flag = f == "true";
        }
        try {
            for (std::size_t j = offset; j < row.fields.size(); ++j) r.values.push_back(parse_double(row.fields[j], "feature"));
        } catch (const ValidationError& e) {
            throw ParseError(source, row.line, e.what());
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace

std::vector<TeamFeatures> parse_team_features(std::istream& in, const std::string& source) {
    std::vector<TeamFeatures> out;
    for (auto& r : parse_features(in, source, team_feature_names(), "team", nullptr))
        out.push_back(TeamFeatures{std::move(r.id), std::move(r.values), {}});
    return out;
}

std::vector<BatterFeatures> parse_batter_features(std::istream& in, const std::string& source) {
    std::vector<BatterFeatures> out;
    for (auto& r : parse_features(in, source, batter_feature_names(), "player", "never_batted"))
        out.push_back(BatterFeatures{std::move(r.id), std::move(r.values), r.flag});
    return out;
}

std::vector<BowlerFeatures> parse_bowler_features(std::istream& in, const std::string& source) {
    std::vector<BowlerFeatures> out;
    for (auto& r : parse_features(in, source, bowler_feature_names(), "player", "never_bowled"))
        out.push_back(BowlerFeatures{std::move(r.id), std::move(r.values), r.flag});
    return out;
}

}  // namespace camp
