#include "fixtures.hpp"

#include <cmath>
#include <stdexcept>

namespace camp::test {

namespace {

std::vector<PlayerId> make_lineup(const TeamId& t) {
    std::vector<PlayerId> v;
    for (int i = 1; i <= kPlayersPerSide; ++i) v.push_back(t + (i < 10 ? "0" : "") + std::to_string(i));
    return v;
}

}  // namespace

MatchBuilder::MatchBuilder(MatchId id, TeamId a, TeamId b, VenueClass venue)
    : id_(std::move(id)), a_(std::move(a)), b_(std::move(b)), venue_(venue), lineup_a_(make_lineup(a_)),
      lineup_b_(make_lineup(b_)), mom_(lineup_a_.front()) {}

const std::string& MatchBuilder::player(int innings_batting, int index) const {
    const auto& l = innings_batting == 1 ? lineup_a_ : lineup_b_;
    return l.at(static_cast<std::size_t>(index - 1));
}

MatchBuilder& MatchBuilder::over(int innings, int bowler, const std::vector<Ball>& balls) {
    auto& s = state_[innings - 1];
    const auto& bat = innings == 1 ? lineup_a_ : lineup_b_;
    const auto& field = innings == 1 ? lineup_b_ : lineup_a_;
    int n = 0;
    for (const auto& d : balls) {
        BallEvent e;
        e.match_id = id_;
        e.innings = innings;
        e.over_index = s.next_over;
        e.ball_in_over = ++n;
        e.striker = bat.at(static_cast<std::size_t>(s.striker));
        e.non_striker = bat.at(static_cast<std::size_t>(s.non_striker));
        e.bowler = field.at(static_cast<std::size_t>(bowler - 1));
        e.runs_off_bat = d.bat;
        e.extras_kind = d.extra;
        e.extras_runs = d.extra_runs;
        e.legal_delivery = d.extra != ExtrasKind::Wide && d.extra != ExtrasKind::NoBall;
        if (d.out) {
            e.dismissal = Dismissal{*d.out, d.non_striker_out ? e.non_striker : e.striker};
            ++s.wickets;
            if (s.wickets < 10) (d.non_striker_out ? s.non_striker : s.striker) = s.next_in++;
        }
        s.runs += e.total_runs();
        const int ran = d.extra == ExtrasKind::Wide ? d.extra_runs - 1 : d.bat + (e.legal_delivery ? d.extra_runs : 0);
        if (ran % 2 == 1) std::swap(s.striker, s.non_striker);
        balls_.push_back(std::move(e));
    }
    std::swap(s.striker, s.non_striker);
    ++s.next_over;
    return *this;
}

MatchBuilder& MatchBuilder::overs(int innings, int n, Ball each) {
    for (int i = 0; i < n; ++i) {
        over(innings, 7 + bowler_cycle_ % 5, std::vector<Ball>(kBallsPerOver, each));
        ++bowler_cycle_;
    }
    return *this;
}

MatchBuilder& MatchBuilder::mom(PlayerId p) {
    mom_ = std::move(p);
    return *this;
}

MatchSummary MatchBuilder::summary() const {
    MatchSummary s;
    s.match_id = id_;
    s.team_a = a_;
    s.team_b = b_;
    s.venue_class = venue_;
    s.innings1_team = a_;
    s.innings2_team = b_;
    s.innings_totals = {InningsTotal{state_[0].runs, state_[0].wickets}, InningsTotal{state_[1].runs, state_[1].wickets}};
    s.winner = state_[1].runs > state_[0].runs ? b_ : a_;
    s.mom_player_id = mom_;
    s.date = "2001-01-01";
    return s;
}

LineupTable MatchBuilder::lineups() const {
    LineupTable t;
    t[id_][a_] = lineup_a_;
    t[id_][b_] = lineup_b_;
    return t;
}

Match MatchBuilder::build() const {
    const std::vector<MatchSummary> s{summary()};
    auto res = assemble_matches(balls_, s, lineups());
    if (res.matches.size() != 1) {
        throw std::logic_error("fixture rejected: " + (res.rejected.empty() ? std::string("?") : res.rejected[0].reason));
    }
    return res.matches.front();
}

Match singles_match(MatchId id) {
    MatchBuilder b(std::move(id));
    b.overs(1, 50, Ball::runs(1));
    b.overs(2, 49, Ball::runs(1));
    b.over(2, 11, {Ball::runs(1), Ball::runs(1), Ball::runs(1), Ball::runs(1), Ball::runs(1), Ball::runs(4)});
    return b.build();
}

Match step_match(MatchId id) {
    MatchBuilder b(std::move(id));
    for (int o = 1; o <= 50; ++o) {
        if (o % 10 == 0) {
            b.over(1, 7 + o % 5, {Ball::runs(6), Ball::runs(0), Ball::runs(0), Ball::runs(0), Ball::runs(0), Ball::runs(1)});
        } else {
            b.over(1, 7 + o % 5, std::vector<Ball>(6, Ball::runs(0)));
        }
    }
    b.over(2, 7, std::vector<Ball>(6, Ball::runs(6)));
    return b.build();
}

ResourceTable step_resource_table() {
    std::vector<ResourceAnchor> a;
    for (int o = 0; o <= kOversPerInnings; ++o)
        for (int w = 0; w <= 9; ++w) a.push_back({o, w, 20.0 * std::ceil(o / 10.0)});
    return ResourceTable::from_anchors(a, "step");
}

std::vector<double> oracle_trace(const Match& m, int innings) {
    const auto& overs = m.innings_overs(innings);
    int total = 0;
    for (const auto& o : overs) total += o.runs_total;
    std::vector<double> r;
    int so_far = 0;
    for (const auto& o : overs) {
        r.push_back(total - so_far);
        so_far += o.runs_total;
    }
    r.push_back(0.0);
    return r;
}

std::vector<Match> assemble(const GeneratedData& data) {
    auto res = assemble_matches(data.balls, data.summaries, data.lineups);
    if (!res.rejected.empty()) throw std::logic_error("generator produced a rejected match");
    return std::move(res.matches);
}

std::vector<Match> synthetic_matches(int n, std::uint64_t seed) {
    GeneratorConfig g;
    g.n_matches = n;
    g.seed = seed;
    return assemble(generate(g));
}

}  // namespace camp::test
