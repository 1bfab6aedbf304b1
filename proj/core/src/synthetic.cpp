#include "camp/synthetic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numbers>

#include "camp/csv.hpp"
#include "camp/features.hpp"

namespace camp {

void GeneratorConfig::validate() const {
    if (n_matches < 1) throw ValidationError("generator: n_matches must be >= 1");
    if (overs_per_innings < 1 || overs_per_innings > kOversPerInnings) {
        throw ValidationError("generator: overs_per_innings must be in 1..50");
    }
    for (const auto& t : tiers) {
        if (!(t.runs_per_over >= 0.0)) throw ValidationError("generator: runs_per_over must be >= 0");
        if (!(t.wicket_hazard >= 0.0 && t.wicket_hazard <= 1.0)) {
            throw ValidationError("generator: wicket_hazard must be in [0,1]");
        }
        if (!(t.bowling_economy >= 0.0) || !(t.bowling_hazard >= 0.0)) {
            throw ValidationError("generator: bowling multipliers must be >= 0");
        }
    }
    auto prob = [](double p, const char* name) {
        if (!(p >= 0.0 && p <= 1.0)) throw ValidationError(std::string("generator: ") + name + " must be in [0,1]");
    };
    prob(asia_fraction, "asia_fraction");
    prob(wide_prob, "wide_prob");
    prob(no_ball_prob, "no_ball_prob");
    prob(bye_prob, "bye_prob");
    prob(leg_bye_prob, "leg_bye_prob");
    prob(run_out_share, "run_out_share");
    if (wide_prob + no_ball_prob >= 1.0 || bye_prob + leg_bye_prob >= 1.0) {
        throw ValidationError("generator: extras probabilities too large");
    }
    if (!(skill_spread >= 0.0)) throw ValidationError("generator: skill_spread must be >= 0");
    for (double f : phase_factor)
        if (!(f >= 0.0)) throw ValidationError("generator: phase factors must be >= 0");
    if (!(asia_run_factor >= 0.0)) throw ValidationError("generator: asia_run_factor must be >= 0");
}

std::vector<TeamId> synthetic_teams() {
    std::vector<TeamId> t;
    for (int i = 1; i <= kTeamsInUniverse; ++i) t.push_back(i < 10 ? "T0" + std::to_string(i) : "T" + std::to_string(i));
    return t;
}

namespace {

constexpr std::array<int, 6> kOutcomes{0, 1, 2, 3, 4, 6};
constexpr std::array<double, 6> kLow{0.60, 0.30, 0.06, 0.01, 0.03, 0.00};
constexpr std::array<double, 6> kHigh{0.25, 0.35, 0.12, 0.02, 0.16, 0.10};

constexpr double mean_of(const std::array<double, 6>& p) {
    double m = 0.0;
    for (std::size_t i = 0; i < 6; ++i) m += p[i] * kOutcomes[i];
    return m;
}

int draw_runs(Rng& rng, double mean) {
    constexpr double lo = mean_of(kLow);
    constexpr double hi = mean_of(kHigh);
    double u = unit_uniform(rng);
    if (mean < lo) {
        // Between an all-dots distribution and the low profile.
        const double a = std::max(0.0, mean) / lo;
        if (u >= a) return 0;
        u /= a;
        for (std::size_t i = 0; i < 6; ++i) {
            if (u < kLow[i]) return kOutcomes[i];
            u -= kLow[i];
        }
        return 0;
    }
    const double a = std::min(1.0, (mean - lo) / (hi - lo));
    for (std::size_t i = 0; i < 6; ++i) {
        const double p = (1.0 - a) * kLow[i] + a * kHigh[i];
        if (u < p) return kOutcomes[i];
        u -= p;
    }
    return 0;
}

/// Expected value of draw_runs, including the clamp at the ends of the family.
double categorical_mean(double mean) {
    constexpr double hi = mean_of(kHigh);
    return std::clamp(mean, 0.0, hi);
}

double standard_normal(Rng& rng) {
    const double u1 = 1.0 - unit_uniform(rng);
    const double u2 = unit_uniform(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

struct Player {
    PlayerId id;
    double rate = 1.0;
    double hazard = 1.0;
    bool bowls = false;
    double economy = 1.0;
    double wicket = 1.0;
};

struct Team {
    TeamId id;
    int tier = 0;
    std::vector<Player> players;
};

std::vector<Team> build_teams(const GeneratorConfig& cfg) {
    std::vector<Team> teams;
    const auto ids = synthetic_teams();
    for (std::size_t t = 0; t < ids.size(); ++t) {
        Team team;
        team.id = ids[t];
        team.tier = t < 3 ? 0 : (t < 7 ? 1 : 2);
        Rng rng(derive_seed(cfg.seed, 1'000'000 + t));
        for (int k = 0; k < kPlayersPerSide; ++k) {
            Player p;
            p.id = team.id + "P" + (k < 9 ? "0" : "") + std::to_string(k + 1);
            if (cfg.archetypes) {
                if (k < 4) {
                    p.rate = 1.15;
                    p.hazard = 0.7;
                } else if (k < 7) {
                    p.rate = 1.0;
                    p.hazard = 1.0;
                } else {
                    p.rate = 0.65;
                    p.hazard = 1.9;
                }
            }
            p.rate *= std::exp(cfg.skill_spread * standard_normal(rng));
            p.hazard *= std::exp(cfg.skill_spread * standard_normal(rng));
            p.bowls = k >= kPlayersPerSide - 5;
            p.economy = std::exp(cfg.skill_spread * standard_normal(rng));
            p.wicket = std::exp(cfg.skill_spread * standard_normal(rng));
            team.players.push_back(std::move(p));
        }
        teams.push_back(std::move(team));
    }
    return teams;
}

struct InningsResult {
    std::vector<BallEvent> balls;
    std::vector<TruthRow> truth;
    int runs = 0;
    int wickets = 0;
    std::map<PlayerId, int> bat_runs;
    std::map<PlayerId, int> bowl_wickets;
};

double phase(const GeneratorConfig& cfg, int over) {
    if (over <= 10) return cfg.phase_factor[0];
    if (over <= 40) return cfg.phase_factor[1];
    return cfg.phase_factor[2];
}

InningsResult simulate_innings(const GeneratorConfig& cfg, Rng& rng, const MatchId& id, int innings, const Team& bat,
                               const Team& bowl, VenueClass venue, int chase_target) {
    InningsResult res;
    const auto& bt = cfg.tiers[static_cast<std::size_t>(bat.tier)];
    const auto& ft = cfg.tiers[static_cast<std::size_t>(bowl.tier)];

    std::vector<std::size_t> bowlers;
    for (std::size_t k = 0; k < bowl.players.size(); ++k)
        if (bowl.players[k].bowls) bowlers.push_back(k);
    for (std::size_t i = bowlers.size(); i > 1; --i) std::swap(bowlers[i - 1], bowlers[uniform_index(rng, i)]);

    std::size_t striker = 0;
    std::size_t non_striker = 1;
    std::size_t next_in = 2;
    const double extras_legal = cfg.bye_prob + cfg.leg_bye_prob;
    const double venue_factor = venue == VenueClass::Asia ? cfg.asia_run_factor : 1.0;
    bool done = false;

    for (int over = 1; over <= cfg.overs_per_innings && !done; ++over) {
        const auto& bw = bowl.players[bowlers[static_cast<std::size_t>(over - 1) % bowlers.size()]];
        int legal = 0;
        int ball = 0;
        double expected = 0.0;
        while (legal < kBallsPerOver && !done) {
            const auto& s = bat.players[striker];
            const double r = bt.runs_per_over / kBallsPerOver * s.rate * ft.bowling_economy * bw.economy *
                             venue_factor * phase(cfg, over);
            const double mb = std::max(0.0, (r - extras_legal) / (1.0 - extras_legal));
            const double h = std::min(0.5, bt.wicket_hazard * s.hazard * ft.bowling_hazard * bw.wicket);

            const double legal_exp = (1.0 - h) * (extras_legal + (1.0 - extras_legal) * categorical_mean(mb));
            expected += cfg.wide_prob + cfg.no_ball_prob * (1.0 + categorical_mean(mb)) +
                        (1.0 - cfg.wide_prob - cfg.no_ball_prob) * legal_exp;

            BallEvent b;
            b.match_id = id;
            b.innings = innings;
            b.over_index = over;
            b.ball_in_over = ++ball;
            b.striker = s.id;
            b.non_striker = bat.players[non_striker].id;
            b.bowler = bw.id;

            int ran = 0;
            const double u = unit_uniform(rng);
            if (u < cfg.wide_prob) {
                b.extras_kind = ExtrasKind::Wide;
                b.extras_runs = 1;
                b.legal_delivery = false;
            } else if (u < cfg.wide_prob + cfg.no_ball_prob) {
                b.extras_kind = ExtrasKind::NoBall;
                b.extras_runs = 1;
                b.legal_delivery = false;
                b.runs_off_bat = draw_runs(rng, mb);
                ran = b.runs_off_bat;
            } else {
                ++legal;
                if (unit_uniform(rng) < h) {
                    const double k = unit_uniform(rng);
                    DismissalKind kind = DismissalKind::Caught;
                    PlayerId out = s.id;
                    if (k < cfg.run_out_share) {
                        kind = DismissalKind::RunOut;
                        if (unit_uniform(rng) < 0.5) out = bat.players[non_striker].id;
                    } else {
                        const double q = (k - cfg.run_out_share) / (1.0 - cfg.run_out_share);
                        kind = q < 0.22 ? DismissalKind::Bowled
                                        : q < 0.80 ? DismissalKind::Caught
                                                   : q < 0.96 ? DismissalKind::Lbw : DismissalKind::Stumped;
                    }
                    b.dismissal = Dismissal{kind, out};
                } else {
                    const double v = unit_uniform(rng);
                    if (v < cfg.bye_prob) {
                        b.extras_kind = ExtrasKind::Bye;
                        b.extras_runs = 1;
                    } else if (v < extras_legal) {
                        b.extras_kind = ExtrasKind::LegBye;
                        b.extras_runs = 1;
                    } else {
                        b.runs_off_bat = draw_runs(rng, mb);
                    }
                    ran = b.runs_off_bat + b.extras_runs;
                }
            }
            validate(b);
            res.runs += b.total_runs();
            res.bat_runs[s.id] += b.runs_off_bat;
            if (b.dismissal) {
                ++res.wickets;
                if (credited_to_bowler(b.dismissal->kind)) res.bowl_wickets[bw.id] += 1;
                const bool striker_out = b.dismissal->player_out == s.id;
                if (res.wickets >= 10) {
                    done = true;
                } else {
                    (striker_out ? striker : non_striker) = next_in++;
                }
            }
            if (b.extras_kind != ExtrasKind::Wide && ran % 2 == 1) std::swap(striker, non_striker);
            res.balls.push_back(std::move(b));
            if (chase_target > 0 && res.runs >= chase_target) done = true;
        }
        res.truth.push_back({id, innings, over, expected});
        std::swap(striker, non_striker);
    }
    return res;
}

std::string date_for(int m) {
    using namespace std::chrono;
    const year_month_day d{sys_days{year{2001} / January / 1} + days{3 * m}};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()), static_cast<unsigned>(d.month()),
                  static_cast<unsigned>(d.day()));
    return buf;
}

}  // namespace

GeneratedData generate(const GeneratorConfig& cfg) {
    cfg.validate();
    const auto teams = build_teams(cfg);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < teams.size(); ++i)
        for (std::size_t j = i + 1; j < teams.size(); ++j) pairs.emplace_back(i, j);

    GeneratedData out;
    for (int m = 0; m < cfg.n_matches; ++m) {
        Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(m)));
        const std::string id = "S" + std::string(m + 1 < 10 ? "000" : m + 1 < 100 ? "00" : m + 1 < 1000 ? "0" : "") +
                               std::to_string(m + 1);
        auto [a, b] = pairs[static_cast<std::size_t>(m) % pairs.size()];
        if (unit_uniform(rng) < 0.5) std::swap(a, b);
        const VenueClass venue = unit_uniform(rng) < cfg.asia_fraction ? VenueClass::Asia : VenueClass::NonAsia;
        const bool a_first = unit_uniform(rng) < 0.5;
        const Team& first = teams[a_first ? a : b];
        const Team& second = teams[a_first ? b : a];

        const auto inn1 = simulate_innings(cfg, rng, id, 1, first, second, venue, 0);
        auto inn2 = simulate_innings(cfg, rng, id, 2, second, first, venue, inn1.runs + 1);
        while (inn2.runs == inn1.runs) inn2 = simulate_innings(cfg, rng, id, 2, second, first, venue, inn1.runs + 1);

        MatchSummary s;
        s.match_id = id;
        s.team_a = teams[a].id;
        s.team_b = teams[b].id;
        s.venue_class = venue;
        s.venue_field = std::string(to_string(venue));
        s.innings1_team = first.id;
        s.innings2_team = second.id;
        s.innings_totals = {InningsTotal{inn1.runs, inn1.wickets}, InningsTotal{inn2.runs, inn2.wickets}};
        const bool chased = inn2.runs > inn1.runs;
        const Team& winner = chased ? second : first;
        s.winner = winner.id;
        s.date = date_for(m);

        double best = -1.0;
        for (const auto& p : winner.players) {
            const auto& res = chased ? inn2 : inn1;
            const auto& other = chased ? inn1 : inn2;
            const auto br = res.bat_runs.find(p.id);
            const auto ww = other.bowl_wickets.find(p.id);
            const double score = (br == res.bat_runs.end() ? 0 : br->second) +
                                 20.0 * (ww == other.bowl_wickets.end() ? 0 : ww->second);
            if (score > best) {
                best = score;
                s.mom_player_id = p.id;
            }
        }

        auto& lu = out.lineups[id];
        for (const Team* t : {&first, &second})
            for (const auto& p : t->players) lu[t->id].push_back(p.id);
        out.lineup_order.push_back({id, {first.id, second.id}});
        for (const InningsResult* r : std::array<const InningsResult*, 2>{&inn1, &inn2}) {
            out.balls.insert(out.balls.end(), r->balls.begin(), r->balls.end());
            out.truth.insert(out.truth.end(), r->truth.begin(), r->truth.end());
        }
        out.summaries.push_back(std::move(s));
    }
    return out;
}

std::string lineups_csv(const GeneratedData& data) {
    std::string out = csv::join(lineup_csv_header()) + "\n";
    for (const auto& [id, order] : data.lineup_order)
        for (const auto& team : order)
            for (const auto& p : data.lineups.at(id).at(team)) out += csv::join({id, team, p}) + "\n";
    return out;
}

std::string truth_csv(std::span<const TruthRow> rows) {
    std::string out = "match_id,innings,over,true_expected_runs\n";
    for (const auto& r : rows) {
        out += csv::join({r.match_id, std::to_string(r.innings), std::to_string(r.over_index),
                          format_double(r.expected_runs)});
        out += "\n";
    }
    return out;
}

}  // namespace camp
