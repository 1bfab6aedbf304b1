#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "camp/csv.hpp"
#include "camp/lnc.hpp"
#include "support/fixtures.hpp"

using namespace camp;
using camp::test::Ball;
using camp::test::MatchBuilder;

TEST(ResourceTable, StandardAnchorsReproduced) {
    const auto& t = ResourceTable::standard();
    const int overs[] = {50, 40, 30, 20, 10};
    const int wkts[] = {0, 2, 4, 9};
    const double pct[5][4] = {{100.0, 83.8, 62.4, 7.6},
                              {90.3, 77.6, 59.8, 7.6},
                              {77.1, 68.2, 54.9, 7.6},
                              {58.9, 54.0, 46.1, 7.6},
                              {34.1, 32.5, 29.8, 7.6}};
    for (int r = 0; r < 5; ++r)
        for (int c = 0; c < 4; ++c) {
            EXPECT_DOUBLE_EQ(t.resource(overs[r], wkts[c]), pct[r][c]);
            EXPECT_TRUE(t.is_anchor(overs[r], wkts[c]));
        }
    EXPECT_FALSE(t.is_anchor(25, 0));
}

TEST(ResourceTable, InterpolatedCells) {
    const auto& t = ResourceTable::standard();
    EXPECT_NEAR(t.resource(25, 0), 68.0, 1e-12);
    EXPECT_NEAR(t.resource(50, 1), 91.9, 1e-12);
    EXPECT_NEAR(t.resource(45, 3), (73.1 + 68.7) / 2.0, 1e-12);
    EXPECT_NEAR(t.resource(10, 7), 29.8 + (7.6 - 29.8) * 3.0 / 5.0, 1e-12);
    EXPECT_NEAR(t.resource(5, 0), 34.1 / 2.0, 1e-12);
    EXPECT_EQ(t.resource(0, 4), 0.0);
    EXPECT_EQ(t.resource(37, 10), 0.0);
    EXPECT_THROW((void)t.resource(51, 0), ValidationError);
    EXPECT_THROW((void)t.resource(10, 11), ValidationError);
}

TEST(ResourceTable, MonotoneOverWholeGrid) {
    const auto& t = ResourceTable::standard();
    for (int o = 0; o <= 50; ++o)
        for (int w = 0; w <= 10; ++w) {
            const double v = t.resource(o, w);
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 100.0);
            if (w > 0) {
                EXPECT_LE(v, t.resource(o, w - 1));
            }
            if (o > 0) {
                EXPECT_GE(v, t.resource(o - 1, w));
            }
        }
}

TEST(ResourceTable, AnchorValidation) {
    auto a = ResourceTable::standard_anchors();
    auto dup = a;
    dup.push_back(a.back());
    EXPECT_THROW((void)ResourceTable::from_anchors(dup), ValidationError);

    auto out_of_range = a;
    out_of_range.push_back({51, 0, 10});
    EXPECT_THROW((void)ResourceTable::from_anchors(out_of_range), ValidationError);

    std::vector<ResourceAnchor> no_zero;
    for (const auto& x : a)
        if (x.overs_left != 0) no_zero.push_back(x);
    EXPECT_THROW((void)ResourceTable::from_anchors(no_zero), ValidationError);

    auto bumpy = a;
    for (auto& x : bumpy)
        if (x.overs_left == 30 && x.wickets_lost == 4) x.resource_pct = 70.0;
    EXPECT_THROW((void)ResourceTable::from_anchors(bumpy), ValidationError);

    auto not_full = a;
    for (auto& x : not_full)
        if (x.overs_left == 50 && x.wickets_lost == 0) x.resource_pct = 99.0;
    EXPECT_THROW((void)ResourceTable::from_anchors(not_full), ValidationError);
}

TEST(ResourceTable, ShippedFileMatchesBuiltIn) {
    const auto t = load_resource_table(std::filesystem::path(CAMP_TEST_DATA_DIR) / "dl_resource_table.csv");
    EXPECT_EQ(resource_table_csv(t), resource_table_csv(ResourceTable::standard()));
    EXPECT_EQ(t.provenance(), "loaded from dl_resource_table.csv");
}

TEST(ResourceTable, CsvAnchorsRoundTrip) {
    const auto a = ResourceTable::standard_anchors();
    std::istringstream in(resource_anchors_csv(a));
    const auto back = parse_resource_anchors(in, "a.csv");
    ASSERT_EQ(back.size(), a.size());
    EXPECT_EQ(resource_table_csv(ResourceTable::from_anchors(back)), resource_table_csv(ResourceTable::standard()));
    std::istringstream bad("overs_left,wickets_lost,resource_pct\n10,x,3\n");
    EXPECT_THROW((void)parse_resource_anchors(bad, "b.csv"), ParseError);
}

TEST(LncProject, ParAndTargetScaling) {
    const auto& t = ResourceTable::standard();
    EXPECT_DOUBLE_EQ(lnc_project(50, 0, t, 1, 0), 235.0);
    EXPECT_NEAR(lnc_project(20, 4, t, 1, 0), 235.0 * 0.461, 1e-9);
    EXPECT_NEAR(lnc_project(10, 2, t, 2, 250), 81.25, 1e-9);
    EXPECT_EQ(lnc_project(0, 0, t, 2, 250), 0.0);
    EXPECT_THROW((void)lnc_project(10, 2, t, 3, 250), ValidationError);
}

TEST(LncTrace, UsesWicketsBeforeEachOver) {
    MatchBuilder b;
    b.over(1, 7, {Ball::wicket(), Ball::wicket(), Ball::runs(0), Ball::runs(0), Ball::runs(0), Ball::runs(0)});
    b.overs(1, 49, Ball::runs(1));
    b.overs(2, 50, Ball::runs(1));
    const auto m = b.build();
    const auto& t = ResourceTable::standard();
    const auto r = lnc_trace(m, 1, t);
    ASSERT_EQ(r.size(), 51u);
    EXPECT_DOUBLE_EQ(r[0], 235.0);
    EXPECT_NEAR(r[10], 235.0 * t.resource(40, 2) / 100.0, 1e-12);
    EXPECT_EQ(r.back(), 0.0);
    const auto r2 = lnc_trace(m, 2, t);
    EXPECT_DOUBLE_EQ(r2[0], static_cast<double>(m.summary.target_runs()));
}

TEST(LncRate, StepTableFixedPointRatesEveryoneZero) {
    const auto m = camp::test::step_match();
    ASSERT_EQ(m.summary.innings_totals[0].runs, 35);
    ASSERT_EQ(m.summary.innings_totals[1].runs, 36);
    const auto rep = lnc_rate_match(m, camp::test::step_resource_table(), ScoringParams{}, 35.0);
    EXPECT_EQ(rep.method, "lnc");
    ASSERT_EQ(rep.rows.size(), 22u);
    for (const auto& r : rep.rows) {
        EXPECT_NEAR(r.c_bat, 0.0, 1e-9) << r.player;
        EXPECT_NEAR(r.c_bowl, 0.0, 1e-9) << r.player;
    }
}

TEST(LncRate, StandardTableCannotReachFixedPoint) {
    const auto m = camp::test::singles_match();
    const auto rep = lnc_rate_match(m, ResourceTable::standard(), ScoringParams{});
    double abs_sum = 0.0;
    for (const auto& r : rep.rows) abs_sum += std::abs(r.c_bowl);
    EXPECT_GT(abs_sum, 1.0);
}
