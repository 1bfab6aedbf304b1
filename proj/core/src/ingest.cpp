#include "camp/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "camp/csv.hpp"

namespace camp {

namespace {

constexpr std::array<std::pair<ExtrasKind, std::string_view>, 5> kExtrasNames{{
    {ExtrasKind::None, "none"},
    {ExtrasKind::Wide, "wide"},
    {ExtrasKind::NoBall, "no_ball"},
    {ExtrasKind::Bye, "bye"},
    {ExtrasKind::LegBye, "leg_bye"},
}};

constexpr std::array<std::pair<DismissalKind, std::string_view>, 7> kDismissalNames{{
    {DismissalKind::Bowled, "bowled"},
    {DismissalKind::Caught, "caught"},
    {DismissalKind::Lbw, "lbw"},
    {DismissalKind::Stumped, "stumped"},
    {DismissalKind::HitWicket, "hit_wicket"},
    {DismissalKind::RunOut, "run_out"},
    {DismissalKind::ObstructingField, "obstructing_field"},
}};

int checked_int(const csv::Row& row, std::size_t col, const char* field, const std::string& src) {
    try {
        const long long v = parse_int(row.fields[col], field);
        if (v < -1'000'000 || v > 1'000'000) throw ValidationError(std::string("field '") + field + "' out of range");
        return static_cast<int>(v);
    } catch (const ValidationError& e) {
        throw ParseError(src, row.line, e.what());
    }
}

bool is_boundary(const BallEvent& b) {
    return b.extras_kind != ExtrasKind::Bye && b.extras_kind != ExtrasKind::LegBye &&
           (b.runs_off_bat == 4 || b.runs_off_bat == 6);
}

}  // namespace

std::string_view to_string(ExtrasKind k) noexcept {
    for (auto& [kind, name] : kExtrasNames)
        if (kind == k) return name;
    return "none";
}

std::optional<ExtrasKind> parse_extras_kind(std::string_view s) noexcept {
    for (auto& [kind, name] : kExtrasNames)
        if (name == s) return kind;
    return std::nullopt;
}

std::string_view to_string(DismissalKind k) noexcept {
    for (auto& [kind, name] : kDismissalNames)
        if (kind == k) return name;
    return "bowled";
}

std::optional<DismissalKind> parse_dismissal_kind(std::string_view s) noexcept {
    for (auto& [kind, name] : kDismissalNames)
        if (name == s) return kind;
    return std::nullopt;
}

void validate(const BallEvent& b) {
    auto fail = [](const char* field, const std::string& why) {
        throw ValidationError(std::string("field '") + field + "': " + why);
    };
    if (b.match_id.empty()) fail("match_id", "empty");
    if (b.innings != 1 && b.innings != 2) fail("innings", "must be 1 or 2");
    if (b.over_index < 1 || b.over_index > kOversPerInnings) fail("over", "must be in 1..50");
    if (b.ball_in_over < 1) fail("ball", "must be >= 1");
    if (b.striker.empty()) fail("striker", "empty");
    if (b.non_striker.empty()) fail("non_striker", "empty");
    if (b.striker == b.non_striker) fail("non_striker", "same player as striker");
    if (b.bowler.empty()) fail("bowler", "empty");
    if (b.runs_off_bat < 0) fail("runs_off_bat", "negative");
    if (b.extras_runs < 0) fail("extras_runs", "negative");
    const bool should_be_legal = !(b.extras_kind == ExtrasKind::Wide || b.extras_kind == ExtrasKind::NoBall);
    if (b.legal_delivery != should_be_legal) {
        fail("legal", std::string("inconsistent with extras_kind '") +
                          std::string(to_string(b.extras_kind)) + "'");
    }
    if (b.extras_kind == ExtrasKind::Wide && b.runs_off_bat != 0) {
        fail("runs_off_bat", "must be 0 on a wide");
    }
    if (b.extras_kind == ExtrasKind::None && b.extras_runs != 0) {
        fail("extras_runs", "non-zero with extras_kind 'none'");
    }
    if (b.dismissal) {
        if (b.dismissal->player_out.empty()) fail("player_out", "empty with a dismissal");
        if (b.dismissal->player_out != b.striker && b.dismissal->player_out != b.non_striker) {
            fail("player_out", "not one of the two batters at the crease");
        }
    }
}

const BatterOverLine* OverRecord::batter(const PlayerId& id) const noexcept {
    for (const auto& line : batters)
        if (line.player == id) return &line;
    return nullptr;
}

std::optional<TeamId> Match::team_of(const PlayerId& player) const {
    for (std::size_t side = 0; side < 2; ++side) {
        const auto& l = lineups[side];
        if (std::find(l.begin(), l.end(), player) != l.end()) {
            return side == 0 ? summary.innings1_team : summary.innings2_team;
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& ball_csv_header() {
    static const std::vector<std::string> h{"match_id", "innings",      "over",        "ball",
                                            "striker",  "non_striker",  "bowler",      "runs_off_bat",
                                            "extras_runs", "extras_kind", "legal",      "dismissal_kind",
                                            "player_out"};
    return h;
}

const std::vector<std::string>& summary_csv_header() {
    static const std::vector<std::string> h{"match_id", "team_a",   "team_b",    "venue_class",
                                            "bat_first", "inn1_runs", "inn1_wkts", "inn2_runs",
                                            "inn2_wkts", "winner",    "mom",       "date"};
    return h;
}

const std::vector<std::string>& lineup_csv_header() {
    static const std::vector<std::string> h{"match_id", "team", "player"};
    return h;
}

std::vector<BallEvent> parse_balls(std::istream& in, const std::string& source) {
    const auto rows = csv::read(in, source, ball_csv_header(), ball_csv_header().size() - 1);
    std::vector<BallEvent> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        const auto& f = row.fields;
        BallEvent b;
        b.match_id = f[0];
        b.innings = checked_int(row, 1, "innings", source);
        b.over_index = checked_int(row, 2, "over", source);
        b.ball_in_over = checked_int(row, 3, "ball", source);
        b.striker = f[4];
        b.non_striker = f[5];
        b.bowler = f[6];
        b.runs_off_bat = checked_int(row, 7, "runs_off_bat", source);
        b.extras_runs = checked_int(row, 8, "extras_runs", source);
        if (auto k = parse_extras_kind(f[9])) {
            b.extras_kind = *k;
        } else {
            throw ParseError(source, row.line, "field 'extras_kind': unknown value '" + f[9] + "'");
        }
        if (f[10] == "true") {
            b.legal_delivery = true;
        } else if (f[10] == "false") {
            b.legal_delivery = false;
        } else {
            throw ParseError(source, row.line, "field 'legal': expected true|false, got '" + f[10] + "'");
        }
        if (!f[11].empty()) {
            auto kind = parse_dismissal_kind(f[11]);
            if (!kind) {
                throw ParseError(source, row.line,
                                 "field 'dismissal_kind': unknown value '" + f[11] + "'");
            }
            b.dismissal = Dismissal{*kind, f[12]};
        } else if (!f[12].empty()) {
            throw ParseError(source, row.line, "field 'player_out': set without a dismissal_kind");
        }
        try {
            validate(b);
        } catch (const ParseError&) {
            throw;
        } catch (const ValidationError& e) {
            throw ParseError(source, row.line, e.what());
        }
        out.push_back(std::move(b));
    }
    return out;
}

std::string serialize_balls(std::span<const BallEvent> balls) {
    std::string out = csv::join(ball_csv_header()) + "\n";
    for (const auto& b : balls) {
        out += csv::join({b.match_id, std::to_string(b.innings), std::to_string(b.over_index),
                          std::to_string(b.ball_in_over), b.striker, b.non_striker, b.bowler,
                          std::to_string(b.runs_off_bat), std::to_string(b.extras_runs),
                          std::string(to_string(b.extras_kind)), b.legal_delivery ? "true" : "false",
                          b.dismissal ? std::string(to_string(b.dismissal->kind)) : "",
                          b.dismissal ? b.dismissal->player_out : ""});
        out.push_back('\n');
    }
    return out;
}

std::vector<MatchSummary> parse_summaries(std::istream& in, const VenueMap& venues,
                                          const std::string& source) {
    const auto rows = csv::read(in, source, summary_csv_header());
    std::vector<MatchSummary> out;
    std::set<MatchId> seen;
    for (const auto& row : rows) {
        const auto& f = row.fields;
        MatchSummary s;
        s.match_id = f[0];
        if (s.match_id.empty()) throw ParseError(source, row.line, "field 'match_id': empty");
        if (!seen.insert(s.match_id).second) {
            throw ParseError(source, row.line, "duplicate match_id '" + s.match_id + "'");
        }
        s.team_a = f[1];
        s.team_b = f[2];
        if (s.team_a.empty() || s.team_b.empty() || s.team_a == s.team_b) {
            throw ParseError(source, row.line, "fields 'team_a'/'team_b': must be two distinct teams");
        }
        s.venue_field = f[3];
        if (auto v = parse_venue_class(f[3])) {
            s.venue_class = *v;
        } else if (auto it = venues.find(f[3]); it != venues.end()) {
            s.venue_class = it->second;
        } else {
            throw ParseError(source, row.line,
                             "field 'venue_class': unknown venue '" + f[3] + "' (not in venue map)");
        }
        if (f[4] == s.team_a) {
            s.innings1_team = s.team_a;
            s.innings2_team = s.team_b;
        } else if (f[4] == s.team_b) {
            s.innings1_team = s.team_b;
            s.innings2_team = s.team_a;
        } else {
            throw ParseError(source, row.line, "field 'bat_first': '" + f[4] + "' is neither team");
        }
        s.innings_totals[0] = {checked_int(row, 5, "inn1_runs", source), checked_int(row, 6, "inn1_wkts", source)};
        s.innings_totals[1] = {checked_int(row, 7, "inn2_runs", source), checked_int(row, 8, "inn2_wkts", source)};
        for (const auto& t : s.innings_totals) {
            if (t.runs < 0) throw ParseError(source, row.line, "innings runs negative");
            if (t.wickets < 0 || t.wickets > 10) throw ParseError(source, row.line, "innings wickets outside 0..10");
        }
        s.winner = f[9];
        s.mom_player_id = f[10];
        s.date = f[11];
        out.push_back(std::move(s));
    }
    return out;
}

std::string serialize_summaries(std::span<const MatchSummary> summaries) {
    std::string out = csv::join(summary_csv_header()) + "\n";
    for (const auto& s : summaries) {
        const std::string venue =
            s.venue_field.empty() ? std::string(to_string(s.venue_class)) : s.venue_field;
        out += csv::join({s.match_id, s.team_a, s.team_b, venue, s.innings1_team,
                          std::to_string(s.innings_totals[0].runs), std::to_string(s.innings_totals[0].wickets),
                          std::to_string(s.innings_totals[1].runs), std::to_string(s.innings_totals[1].wickets),
                          s.winner, s.mom_player_id, s.date});
        out.push_back('\n');
    }
    return out;
}

LineupTable parse_lineups(std::istream& in, const std::string& source) {
    const auto rows = csv::read(in, source, lineup_csv_header());
    LineupTable out;
    for (const auto& row : rows) {
        const auto& f = row.fields;
        if (f[0].empty() || f[1].empty() || f[2].empty()) {
            throw ParseError(source, row.line, "empty field in lineup row");
        }
        auto& players = out[f[0]][f[1]];
        if (std::find(players.begin(), players.end(), f[2]) != players.end()) {
            throw ParseError(source, row.line, "player '" + f[2] + "' listed twice");
        }
        players.push_back(f[2]);
    }
    return out;
}

std::string serialize_lineups(std::span<const Match> matches) {
    std::string out = csv::join(lineup_csv_header()) + "\n";
    for (const auto& m : matches) {
        for (std::size_t side = 0; side < 2; ++side) {
            const auto& team = side == 0 ? m.summary.innings1_team : m.summary.innings2_team;
            for (const auto& p : m.lineups[side]) out += csv::join({m.id(), team, p}) + "\n";
        }
    }
    return out;
}

VenueMap parse_venue_map(std::string_view json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("venue map: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("venue map: expected a JSON object");
    VenueMap out;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!it.value().is_string()) {
            throw ValidationError("venue map: value for '" + it.key() + "' must be a string");
        }
        auto v = parse_venue_class(it.value().get<std::string>());
        if (!v) throw ValidationError("venue map: '" + it.key() + "' must map to Asia or NonAsia");
        out.emplace(it.key(), *v);
    }
    return out;
}

// ---------------------------------------------------------------------------

std::vector<OverRecord> aggregate_overs(std::span<const BallEvent> balls) {
    std::vector<OverRecord> out;
    if (balls.empty()) return out;

    const MatchId& match = balls.front().match_id;
    std::tuple<int, int, int> prev{0, 0, 0};
    // deliveries per bowler within the current over, first-appearance order
    std::vector<std::pair<PlayerId, int>> bowler_counts;

    auto close_over = [&] {
        if (out.empty()) return;
        auto best = std::max_element(bowler_counts.begin(), bowler_counts.end(),
                                     [](const auto& a, const auto& b) { return a.second < b.second; });
        out.back().bowler = best->first;
        bowler_counts.clear();
    };

    for (const auto& b : balls) {
        if (b.match_id != match) {
            throw ValidationError("aggregate_overs: balls from more than one match ('" + match +
                                  "', '" + b.match_id + "')");
        }
        const std::tuple<int, int, int> key{b.innings, b.over_index, b.ball_in_over};
        if (!(prev < key)) {
            throw ValidationError("aggregate_overs: " + match + " balls not strictly sorted at innings " +
                                  std::to_string(b.innings) + " over " + std::to_string(b.over_index) +
                                  " ball " + std::to_string(b.ball_in_over));
        }
        const bool new_over = out.empty() || out.back().innings != b.innings ||
                              out.back().over_index != b.over_index;
        if (new_over) {
            const int expected_over =
                (!out.empty() && out.back().innings == b.innings) ? out.back().over_index + 1 : 1;
            if (b.over_index != expected_over) {
                throw ValidationError("aggregate_overs: " + match + " innings " + std::to_string(b.innings) +
                                      " jumps to over " + std::to_string(b.over_index) + " (expected " +
                                      std::to_string(expected_over) + ")");
            }
            close_over();
            OverRecord rec;
            rec.match_id = match;
            rec.innings = b.innings;
            rec.over_index = b.over_index;
            out.push_back(std::move(rec));
        }
        prev = key;

        OverRecord& rec = out.back();
        rec.ball_count += 1;
        rec.runs_total += b.total_runs();
        rec.extras_total += b.extras_runs;
        if (b.extras_kind == ExtrasKind::Bye || b.extras_kind == ExtrasKind::LegBye) {
            rec.bye_runs += b.extras_runs;
        }
        if (b.legal_delivery) rec.legal_deliveries += 1;

        auto line_for = [&rec](const PlayerId& p) -> BatterOverLine& {
            for (auto& l : rec.batters)
                if (l.player == p) return l;
            rec.batters.push_back(BatterOverLine{p, 0, 0, 0});
            return rec.batters.back();
        };
        (void)line_for(b.striker);
        (void)line_for(b.non_striker);
        if (b.extras_kind != ExtrasKind::Wide) {
            auto& line = line_for(b.striker);
            line.runs += b.runs_off_bat;
            if (b.legal_delivery) line.balls += 1;
            if (is_boundary(b)) line.boundaries += 1;
        }
        if (b.dismissal) {
            (void)line_for(b.dismissal->player_out);
            rec.wickets.push_back(WicketEvent{b.dismissal->kind, b.dismissal->player_out,
                                              credited_to_bowler(b.dismissal->kind)});
        }

        auto it = std::find_if(bowler_counts.begin(), bowler_counts.end(),
                               [&](const auto& e) { return e.first == b.bowler; });
        if (it == bowler_counts.end()) {
            bowler_counts.emplace_back(b.bowler, 1);
        } else {
            it->second += 1;
        }
    }
    close_over();

    for (std::size_t i = 0; i < out.size(); ++i) {
        const bool last_of_innings = i + 1 == out.size() || out[i + 1].innings != out[i].innings;
        out[i].short_over = !last_of_innings && out[i].legal_deliveries < kBallsPerOver;
    }
    return out;
}

AssembleResult assemble_matches(std::span<const BallEvent> balls,
                                std::span<const MatchSummary> summaries, const LineupTable& lineups) {
    std::map<MatchId, std::vector<BallEvent>> by_match;
    for (const auto& b : balls) by_match[b.match_id].push_back(b);

    std::set<MatchId> known;
    for (const auto& s : summaries) known.insert(s.match_id);
    for (const auto& [id, _] : by_match) {
        if (!known.count(id)) throw ValidationError("balls reference match '" + id + "' with no summary");
    }

    AssembleResult result;
    for (const auto& s : summaries) {
        const auto& id = s.match_id;
        if (s.winner != s.team_a && s.winner != s.team_b) {
            result.rejected.push_back({id, "no result (winner '" + s.winner + "')"});
            continue;
        }

        Match m;
        m.summary = s;
        auto lit = lineups.find(id);
        if (lit == lineups.end()) throw ValidationError(id + ": no lineups");
        for (std::size_t side = 0; side < 2; ++side) {
            const auto& team = side == 0 ? s.innings1_team : s.innings2_team;
            auto tit = lit->second.find(team);
            if (tit == lit->second.end()) throw ValidationError(id + ": no lineup for team '" + team + "'");
            if (tit->second.size() != static_cast<std::size_t>(kPlayersPerSide)) {
                throw ValidationError(id + ": lineup for '" + team + "' has " +
                                      std::to_string(tit->second.size()) + " players, expected 11");
            }
            m.lineups[side] = tit->second;
        }
        if (lit->second.size() != 2) throw ValidationError(id + ": lineups list a team not in the match");
        {
            std::set<PlayerId> all(m.lineups[0].begin(), m.lineups[0].end());
            all.insert(m.lineups[1].begin(), m.lineups[1].end());
            if (all.size() != 2 * static_cast<std::size_t>(kPlayersPerSide)) {
                throw ValidationError(id + ": a player appears in both lineups");
            }
        }
        if (!m.team_of(s.mom_player_id)) {
            throw ValidationError(id + ": MoM '" + s.mom_player_id + "' is not in either lineup");
        }

        auto bit = by_match.find(id);
        if (bit == by_match.end()) throw ValidationError(id + ": no ball-by-ball data");
        for (const auto& b : bit->second) {
            const auto& bat = m.batting_lineup(b.innings);
            const auto& bowl = m.bowling_lineup(b.innings);
            auto in = [](const std::vector<PlayerId>& v, const PlayerId& p) {
                return std::find(v.begin(), v.end(), p) != v.end();
            };
            if (!in(bat, b.striker) || !in(bat, b.non_striker)) {
                throw ValidationError(id + ": innings " + std::to_string(b.innings) + " over " +
                                      std::to_string(b.over_index) + ": batter not in batting lineup");
            }
            if (!in(bowl, b.bowler)) {
                throw ValidationError(id + ": innings " + std::to_string(b.innings) + " over " +
                                      std::to_string(b.over_index) + ": bowler '" + b.bowler +
                                      "' not in fielding lineup");
            }
        }

        auto overs = aggregate_overs(bit->second);
        for (auto& o : overs) {
            if (o.short_over) {
                result.warnings.push_back(id + ": innings " + std::to_string(o.innings) + " over " +
                                          std::to_string(o.over_index) + " has only " +
                                          std::to_string(o.legal_deliveries) + " legal deliveries");
            }
            m.overs[static_cast<std::size_t>(o.innings - 1)].push_back(std::move(o));
        }

        bool rejected = false;
        for (int inn = 1; inn <= 2 && !rejected; ++inn) {
            const auto& ov = m.innings_overs(inn);
            if (ov.empty()) throw ValidationError(id + ": innings " + std::to_string(inn) + " has no balls");
            int runs = 0;
            int wkts = 0;
            for (const auto& o : ov) {
                runs += o.runs_total;
                wkts += o.wicket_count();
            }
            const auto& tot = s.innings_totals[static_cast<std::size_t>(inn - 1)];
            if (runs != tot.runs || wkts != tot.wickets) {
                throw ValidationError(id + ": innings " + std::to_string(inn) + " balls sum to " +
                                      std::to_string(runs) + "/" + std::to_string(wkts) +
                                      " but summary says " + std::to_string(tot.runs) + "/" +
                                      std::to_string(tot.wickets));
            }
            const bool full = static_cast<int>(ov.size()) == kOversPerInnings &&
                              ov.back().legal_deliveries >= kBallsPerOver;
            const bool all_out = wkts >= 10;
            const bool chased = inn == 2 && runs >= s.target_runs();
            if (!full && !all_out && !chased) {
                result.rejected.push_back(
                    {id, "innings " + std::to_string(inn) + " ended early without all-out (shortened match)"});
                rejected = true;
            }
        }
        if (rejected) continue;

        const bool chased = s.innings_totals[1].runs >= s.target_runs();
        if ((s.winner == s.innings2_team) != chased) {
            throw ValidationError(id + ": winner '" + s.winner + "' contradicts the innings totals");
        }
        result.matches.push_back(std::move(m));
    }
    return result;
}

// ---------------------------------------------------------------------------

InningsStats innings_stats(std::span<const Match> matches, int innings) {
    InningsStats st;
    if (matches.empty()) return st;
    const auto idx = static_cast<std::size_t>(innings - 1);
    st.count = matches.size();
    st.min = std::numeric_limits<double>::infinity();
    st.max = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (const auto& m : matches) {
        const double r = m.summary.innings_totals[idx].runs;
        st.min = std::min(st.min, r);
        st.max = std::max(st.max, r);
        sum += r;
    }
    st.mean = sum / static_cast<double>(st.count);
    double ss = 0.0;
    for (const auto& m : matches) {
        const double d = m.summary.innings_totals[idx].runs - st.mean;
        ss += d * d;
    }
    st.std = std::sqrt(ss / static_cast<double>(st.count));
    return st;
}

PreprocessResult preprocess_matches(std::span<const Match> matches, const PreprocessConfig& config,
                                    const std::optional<FilterBand>& fixed_band) {
    if (matches.size() < 2) {
        throw ValidationError("preprocess_matches: need at least 2 matches (std undefined)");
    }
    PreprocessResult res;
    auto& rep = res.report;
    rep.input_matches = matches.size();
    rep.before = {innings_stats(matches, 1), innings_stats(matches, 2)};

    auto excluded = [&](const TeamId& t) {
        return std::find(config.excluded_teams.begin(), config.excluded_teams.end(), t) !=
               config.excluded_teams.end();
    };
    std::vector<Match> pool;
    for (const auto& m : matches) {
        if (excluded(m.summary.team_a) || excluded(m.summary.team_b)) {
            ++rep.removed_by_team;
        } else {
            pool.push_back(m);
        }
    }
    if (pool.empty()) throw ValidationError("preprocess_matches: every match involves an excluded team");

    if (fixed_band) {
        rep.band = *fixed_band;
    } else {
        for (int inn = 1; inn <= 2; ++inn) {
            const auto st = innings_stats(pool, inn);
            const auto i = static_cast<std::size_t>(inn - 1);
            rep.band.lower[i] = st.mean - config.sigma_band * st.std;
            rep.band.upper[i] = st.mean + config.sigma_band * st.std;
        }
    }

    for (auto& m : pool) {
        bool keep = true;
        for (std::size_t i = 0; i < 2; ++i) {
            const double r = m.summary.innings_totals[i].runs;
            if (r < rep.band.lower[i] || r > rep.band.upper[i]) keep = false;
        }
        if (keep) {
            res.matches.push_back(std::move(m));
        } else {
            ++rep.removed_by_band;
        }
    }
    if (res.matches.empty()) throw ValidationError("preprocess_matches: all matches filtered out");
    rep.output_matches = res.matches.size();
    rep.after = {innings_stats(res.matches, 1), innings_stats(res.matches, 2)};
    return res;
}

}  // namespace camp
