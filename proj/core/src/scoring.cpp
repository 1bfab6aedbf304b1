#include "camp/scoring.hpp"

#include <algorithm>
#include <cmath>

#include "camp/csv.hpp"

namespace camp {

void ScoringParams::validate() const {
    if (!(w >= 0.1 && w <= 1.0)) throw ValidationError("w must be in [0.1, 1], got " + format_double(w));
    if (!(w_bat >= 0.0) || !std::isfinite(w_bat)) throw ValidationError("w_bat must be >= 0");
    if (!(w_bowl >= 0.0) || !std::isfinite(w_bowl)) throw ValidationError("w_bowl must be >= 0");
}

double camp_score(double c_bat, double c_bowl, const ScoringParams& p) noexcept {
    return p.w_bat * c_bat + p.w_bowl * c_bowl;
}

std::vector<OverExpectation> expected_runs(std::span<const double> r, std::span<const OverRecord> overs,
                                           const ScoringParams& params) {
    if (r.size() != overs.size() + 1) {
        throw ValidationError("expected_runs: " + std::to_string(overs.size()) + " overs need " +
                              std::to_string(overs.size() + 1) + " projections, got " + std::to_string(r.size()));
    }
    std::vector<OverExpectation> out;
    out.reserve(overs.size());
    for (std::size_t i = 0; i < overs.size(); ++i) {
        OverExpectation x;
        x.over_index = overs[i].over_index;
        x.e = r[i] - r[i + 1];
        x.wickets = overs[i].wicket_count();
        x.e_prime = x.wickets > 0 ? x.e * std::pow(1.0 - params.w, x.wickets) : x.e;
        if (params.scale_final_partial_over && i + 1 == overs.size() &&
            overs[i].legal_deliveries < kBallsPerOver) {
            x.scale = static_cast<double>(overs[i].legal_deliveries) / kBallsPerOver;
        }
        out.push_back(x);
    }
    return out;
}

std::vector<BatterContribution> batter_contribution(const OverRecord& over, const OverExpectation& exp) {
    std::vector<BatterContribution> out;
    for (const auto& line : over.batters) {
        if (line.balls > over.legal_deliveries) {
            throw ValidationError("batter " + line.player + " faced " + std::to_string(line.balls) +
                                  " legal balls in an over of " + std::to_string(over.legal_deliveries));
        }
        const bool out_here = std::any_of(over.wickets.begin(), over.wickets.end(),
                                          [&](const auto& w) { return w.player_out == line.player; });
        if (line.balls == 0 && line.runs == 0 && !out_here) continue;
        out.push_back({line.player, line.runs - exp.per_ball() * line.balls});
    }
    return out;
}

double bowler_contribution(const OverRecord& over, const OverExpectation& exp, const ScoringParams& params) {
    if (over.bowler.empty()) {
        throw ValidationError("over " + std::to_string(over.over_index) + " of " + over.match_id + " has no bowler");
    }
    const int conceded = params.byes_against_bowler ? over.runs_total : over.runs_total - over.bye_runs;
    return exp.over_expectation() - conceded;
}

ContributionLedger build_ledger(const Match& match, std::span<const double> r1, std::span<const double> r2,
                                const ScoringParams& params) {
    params.validate();
    ContributionLedger led;
    for (int inn = 1; inn <= 2; ++inn) {
        const auto& overs = match.innings_overs(inn);
        const auto r = inn == 1 ? r1 : r2;
        auto exps = expected_runs(r, overs, params);
        led.overs_per_innings[static_cast<std::size_t>(inn - 1)] = static_cast<int>(overs.size());
        for (std::size_t i = 0; i < overs.size(); ++i) {
            const auto& o = overs[i];
            const auto& x = exps[i];
            for (const auto& b : batter_contribution(o, x)) led.batting[b.player].push_back({inn, o.over_index, b.c});
            led.bowling[o.bowler].push_back({inn, o.over_index, bowler_contribution(o, x, params)});
            for (const auto& w : o.wickets) {
                DismissalEntry d{inn, o.over_index, w.player_out, w.kind, std::nullopt, x.e};
                if (w.bowler_credited) d.credited_bowler = o.bowler;
                led.dismissals.push_back(std::move(d));
            }
        }
        led.expectations[static_cast<std::size_t>(inn - 1)] = std::move(exps);
    }
    return led;
}

const PlayerRating& RatingReport::row(const PlayerId& p) const {
    for (const auto& r : rows)
        if (r.player == p) return r;
    throw ValidationError("rating report for " + match_id + " has no player " + p);
}

bool rank_before(const PlayerRating& a, const PlayerRating& b) noexcept {
    if (a.camp_score != b.camp_score) return a.camp_score > b.camp_score;
    if (a.c_bat != b.c_bat) return a.c_bat > b.c_bat;
    return a.player < b.player;
}

void assign_ranks(RatingReport& report) {
    std::sort(report.rows.begin(), report.rows.end(), rank_before);
    int k = 0;
    for (auto& r : report.rows) {
        r.rank_all22 = static_cast<int>(&r - report.rows.data()) + 1;
        if (r.team == report.winner) {
            r.rank_winning11 = ++k;
        } else {
            r.rank_winning11.reset();
        }
    }
}

RatingReport aggregate_match(const Match& match, const ContributionLedger& ledger, const ScoringParams& params) {
    params.validate();
    RatingReport rep;
    rep.match_id = match.id();
    rep.winner = match.summary.winner;
    rep.params = params;

    std::map<PlayerId, PlayerRating> by;
    for (int side = 0; side < 2; ++side) {
        const auto& team = side == 0 ? match.summary.innings1_team : match.summary.innings2_team;
        for (const auto& p : match.lineups[static_cast<std::size_t>(side)]) {
            auto& r = by[p];
            r.player = p;
            r.team = team;
        }
    }
    auto lookup = [&](const PlayerId& p) -> PlayerRating& {
        auto it = by.find(p);
        if (it == by.end()) throw ValidationError("player " + p + " in ledger is not in either lineup of " + match.id());
        return it->second;
    };
    for (const auto& [p, entries] : ledger.batting)
        for (const auto& e : entries) lookup(p).c_bat += e.value;
    for (const auto& [p, entries] : ledger.bowling)
        for (const auto& e : entries) lookup(p).c_bowl += e.value;
    for (const auto& d : ledger.dismissals) {
        if (d.innings < 1 || d.innings > 2 || d.over_index < 1 ||
            d.over_index > ledger.overs_per_innings[static_cast<std::size_t>(d.innings - 1)]) {
            throw ValidationError("dismissal of " + d.batter + " in over " + std::to_string(d.over_index) +
                                  " of innings " + std::to_string(d.innings) + " is outside the ledger");
        }
        lookup(d.batter).c_bat -= params.w * d.e;
        if (d.credited_bowler) lookup(*d.credited_bowler).c_bowl += params.w * d.e;
    }
    for (auto& [p, r] : by) {
        r.camp_score = camp_score(r.c_bat, r.c_bowl, params);
        rep.rows.push_back(r);
    }
    assign_ranks(rep);
    return rep;
}

RatingReport rate_match(const Match& match, std::span<const double> r1, std::span<const double> r2,
                        const ScoringParams& params, std::string method) {
    auto rep = aggregate_match(match, build_ledger(match, r1, r2, params), params);
    rep.method = std::move(method);
    return rep;
}

RatingReport camp_rate_match(const Match& match, const ClusterAssignments& clusters, const ProjectionModel& m1,
                             const ProjectionModel& m2, const ScoringParams& params) {
    const auto r1 = project_innings(match, 1, clusters, m1);
    const auto r2 = project_innings(match, 2, clusters, m2);
    return rate_match(match, r1, r2, params, "camp");
}

RatingReport rate_from_traces(const Match& match, const TraceTable& traces, const ScoringParams& params,
                              std::string method) {
    auto get = [&](int inn) -> const std::vector<double>& {
        auto it = traces.find({match.id(), inn});
        if (it == traces.end()) {
            throw ValidationError("no projection trace for " + match.id() + " innings " + std::to_string(inn));
        }
        return it->second;
    };
    return rate_match(match, get(1), get(2), params, std::move(method));
}

const std::vector<std::string>& rating_csv_header() {
    static const std::vector<std::string> h{"match_id", "player",     "team",           "c_bat",
                                            "c_bowl",   "camp_score", "rank_winning11", "rank_all22"};
    return h;
}

std::string ratings_csv(std::span<const RatingReport> reports) {
    std::string out = csv::join(rating_csv_header()) + "\n";
    for (const auto& rep : reports)
        for (const auto& r : rep.rows) {
            out += csv::join({rep.match_id, r.player, r.team, format_double(r.c_bat), format_double(r.c_bowl),
                              format_double(r.camp_score),
                              r.rank_winning11 ? std::to_string(*r.rank_winning11) : std::string(),
                              std::to_string(r.rank_all22)});
            out += "\n";
        }
    return out;
}

std::vector<RatingReport> parse_ratings(std::istream& in, const std::string& source) {
    std::vector<RatingReport> out;
    std::map<MatchId, std::size_t> index;
    for (const auto& row : csv::read(in, source, rating_csv_header())) {
        try {
            const auto& f = row.fields;
            auto [it, fresh] = index.try_emplace(f[0], out.size());
            if (fresh) {
                out.emplace_back();
                out.back().match_id = f[0];
            }
            auto& rep = out[it->second];
            PlayerRating r;
            r.player = f[1];
            r.team = f[2];
            r.c_bat = parse_double(f[3], "c_bat");
            r.c_bowl = parse_double(f[4], "c_bowl");
            r.camp_score = parse_double(f[5], "camp_score");
            if (!f[6].empty()) {
                r.rank_winning11 = static_cast<int>(parse_int(f[6], "rank_winning11"));
                rep.winner = r.team;
            }
            r.rank_all22 = static_cast<int>(parse_int(f[7], "rank_all22"));
            rep.rows.push_back(std::move(r));
        } catch (const ParseError&) {
            throw;
        } catch (const ValidationError& e) {
            throw ParseError(source, row.line, e.what());
        }
    }
    return out;
}

std::vector<SeriesRow> aggregate_series(std::span<const RatingReport> reports) {
    if (reports.empty()) throw ValidationError("aggregate_series: no reports");
    std::map<PlayerId, SeriesRow> by;
    for (const auto& rep : reports)
        for (const auto& r : rep.rows) {
            auto& s = by[r.player];
            s.player = r.player;
            s.team = r.team;
            s.matches += 1;
            s.c_bat += r.c_bat;
            s.c_bowl += r.c_bowl;
            s.camp_score += r.camp_score;
        }
    std::vector<SeriesRow> out;
    for (auto& [p, s] : by) out.push_back(s);
    std::sort(out.begin(), out.end(), [](const SeriesRow& a, const SeriesRow& b) {
        if (a.camp_score != b.camp_score) return a.camp_score > b.camp_score;
        if (a.c_bat != b.c_bat) return a.c_bat > b.c_bat;
        return a.player < b.player;
    });
    for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = static_cast<int>(i) + 1;
    return out;
}

std::string series_csv(std::span<const SeriesRow> rows) {
    std::string out = "player,team,matches,c_bat,c_bowl,camp_score,rank\n";
    for (const auto& s : rows) {
        out += csv::join({s.player, s.team, std::to_string(s.matches), format_double(s.c_bat),
                          format_double(s.c_bowl), format_double(s.camp_score), std::to_string(s.rank)});
        out += "\n";
    }
    return out;
}

}  // namespace camp
