#include <gtest/gtest.h>

#include <random>

#include <nlohmann/json.hpp>

#include "camp/evaluation.hpp"
#include "camp/lnc.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace camp;

namespace {

std::vector<RatingReport> oracle_reports(const std::vector<Match>& ms) {
    std::vector<RatingReport> out;
    for (const auto& m : ms)
        out.push_back(rate_match(m, camp::test::oracle_trace(m, 1), camp::test::oracle_trace(m, 2), ScoringParams{}));
    return out;
}

std::vector<MatchSummary> summaries(const std::vector<Match>& ms) {
    std::vector<MatchSummary> s;
    for (const auto& m : ms) s.push_back(m.summary);
    return s;
}

}  // namespace

TEST(Agreement, SingleMatchWithMomAtRankOne) {
    const auto ms = camp::test::synthetic_matches(1, 21);
    auto reps = oracle_reports(ms);
    auto s = summaries(ms);
    const auto& top = *std::find_if(reps[0].rows.begin(), reps[0].rows.end(),
                                    [](const auto& r) { return r.rank_winning11 == 1; });
    s[0].mom_player_id = top.player;
    const auto a = mom_agreement(reps, s);
    EXPECT_EQ(a.n_matches, 1u);
    EXPECT_EQ(a.winning11.fraction(a.winning11.rank1), 1.0);
    EXPECT_EQ(a.winning11.fraction(a.winning11.top3), 1.0);
}

TEST(Agreement, CountsNestAndLosersNeverAgreeInWinningPool) {
    const auto ms = camp::test::synthetic_matches(40, 22);
    const auto reps = oracle_reports(ms);
    auto s = summaries(ms);
    std::mt19937_64 gen(1);
    for (std::size_t i = 0; i < s.size(); ++i) s[i].mom_player_id = reps[i].rows[gen() % 22].player;
    const auto a = mom_agreement(reps, s);
    for (const auto* c : {&a.winning11, &a.all22}) {
        EXPECT_EQ(c->n, 40u);
        EXPECT_LE(c->rank1, c->top2);
        EXPECT_LE(c->top2, c->top3);
        EXPECT_LE(c->top3, c->n);
    }
    std::size_t losing = 0;
    std::size_t winning_top1 = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto& r = reps[i].row(s[i].mom_player_id);
        if (!r.rank_winning11) ++losing;
        if (r.rank_winning11 == 1) ++winning_top1;
    }
    EXPECT_EQ(a.winning11.rank1, winning_top1);
    EXPECT_LE(a.winning11.top3, 40u - losing);
    const nlohmann::json j = a;
    EXPECT_EQ(j["winning11"]["n"], 40);
}

TEST(Agreement, MissingSummaryOrMomIsError) {
    const auto ms = camp::test::synthetic_matches(2, 23);
    const auto reps = oracle_reports(ms);
    auto s = summaries(ms);
    EXPECT_THROW((void)mom_agreement(reps, std::span(s).first(1)), ValidationError);
    s[0].mom_player_id = "NOBODY";
    EXPECT_THROW((void)mom_agreement(reps, s), ValidationError);
}

TEST(Compare, SelfComparisonHasZeroDeltas) {
    const auto ms = camp::test::synthetic_matches(3, 24);
    const auto reps = oracle_reports(ms);
    const auto c = compare_methods(reps, reps, "a", "b");
    EXPECT_EQ(c.rows.size(), 66u);
    for (const auto& r : c.rows) {
        EXPECT_EQ(r.score_a, r.score_b);
        EXPECT_EQ(r.rank_all22_a, r.rank_all22_b);
    }
    const auto text = comparison_csv(c);
    EXPECT_EQ(text.substr(0, text.find('\n')),
              "match_id,player,team,a_score,b_score,a_rank_all22,b_rank_all22,a_rank_winning11,b_rank_winning11,"
              "score_delta,rank_all22_delta");
}

TEST(Compare, SwappingMethodsNegatesDelta) {
    const auto ms = camp::test::synthetic_matches(3, 25);
    const auto camp_r = oracle_reports(ms);
    std::vector<RatingReport> lnc_r;
    for (const auto& m : ms) lnc_r.push_back(lnc_rate_match(m, ResourceTable::standard(), ScoringParams{}));
    const auto ab = compare_methods(camp_r, lnc_r);
    const auto ba = compare_methods(lnc_r, camp_r, "lnc", "camp");
    std::map<std::pair<MatchId, PlayerId>, double> d;
    for (const auto& r : ab.rows) d[{r.match_id, r.player}] = r.score_a - r.score_b;
    for (const auto& r : ba.rows) EXPECT_EQ(d.at({r.match_id, r.player}), -(r.score_a - r.score_b));
    EXPECT_THROW((void)compare_methods(camp_r, std::span(lnc_r).first(2)), ValidationError);
}

TEST(Ks, AgreesWithBruteForceEcdf) {
    std::mt19937_64 gen(3);
    std::uniform_int_distribution<int> score(150, 320);
    for (int t = 0; t < 50; ++t) {
        std::vector<double> a(1 + gen() % 30);
        std::vector<double> b(1 + gen() % 30);
        for (auto& v : a) v = score(gen);
        for (auto& v : b) v = score(gen) + 10;
        EXPECT_NEAR(ks_statistic(a, b), camp::oracle::ks(a, b), 1e-12);
    }
    EXPECT_EQ(ks_statistic({1, 2, 3}, {1, 2, 3}), 0.0);
    EXPECT_EQ(ks_statistic({1, 2}, {5, 6}), 1.0);
    EXPECT_THROW((void)ks_statistic({}, {1}), ValidationError);
}

TEST(VenueDistributions, EcdfMonotoneAndKsMatches) {
    const auto ms = camp::test::synthetic_matches(60, 26);
    const auto d = export_venue_distributions(ms);
    EXPECT_EQ(d.scores.size(), 120u);
    for (std::size_t i = 1; i < d.scores.size(); ++i) {
        const auto& p = d.scores[i - 1];
        const auto& c = d.scores[i];
        if (p.innings == c.innings && p.venue == c.venue) {
            EXPECT_LE(p.total, c.total);
            EXPECT_LE(p.ecdf, c.ecdf);
        }
    }
    ASSERT_EQ(d.ks.size(), 2u);
    for (const auto& k : d.ks) {
        std::vector<double> a;
        std::vector<double> b;
        for (const auto& m : ms)
            (m.summary.venue_class == VenueClass::Asia ? a : b)
                .push_back(m.summary.innings_totals[static_cast<std::size_t>(k.innings - 1)].runs);
        EXPECT_EQ(k.n_asia, a.size());
        ASSERT_TRUE(k.statistic.has_value());
        EXPECT_NEAR(*k.statistic, camp::oracle::ks(a, b), 1e-12);
    }
    const auto ks_text = venue_ks_csv(d);
    EXPECT_EQ(std::count(ks_text.begin(), ks_text.end(), '\n'), 3);
}

TEST(MaeSummary, MeanOverOversWithData) {
    MaeCurve c;
    c.model = "knn";
    c.innings = 1;
    c.mae[0] = 10.0;
    c.n[0] = 3;
    c.mae[1] = 20.0;
    c.n[1] = 1;
    MaeCurve empty;
    empty.model = "ridge";
    const std::vector<MaeCurve> cs{c, empty};
    const auto j = nlohmann::json::parse(mae_summary_json(cs));
    EXPECT_EQ(j[0]["mean_mae"], 15.0);
    EXPECT_EQ(j[0]["n"], 4);
    EXPECT_TRUE(j[1]["mean_mae"].is_null());
}
