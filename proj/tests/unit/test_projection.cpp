#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "camp/projection.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace camp;

namespace {

TrainingExample ex(const MatchId& m, int overs, int wkts, double a, std::vector<double> x, int innings = 1) {
    TrainingExample e;
    e.match_id = m;
    e.innings = innings;
    e.boundary = kOversPerInnings - overs + 1;
    e.overs_remaining = overs;
    e.wickets_lost = wkts;
    e.actual_remaining = a;
    e.x = std::move(x);
    return e;
}

const KnnParams kDefault{};

ClusterAssignments simple_clusters(std::span<const Match> ms) {
    ClusterAssignments c;
    int i = 0;
    for (const auto& m : ms)
        for (const auto& t : {m.summary.team_a, m.summary.team_b})
            if (!c.teams.count(t)) c.teams[t] = 1 + (i++) % 3;
    return c;
}

std::vector<TrainingExample> league_examples(int n, std::uint64_t seed, int innings) {
    const auto ms = camp::test::synthetic_matches(n, seed);
    return build_training_examples(ms, simple_clusters(ms), innings);
}

}  // namespace

TEST(Knn, SingleCandidateReturnsItsTarget) {
    const KnnStore s({ex("M1", 10, 2, 120, {1, 2}), ex("M2", 30, 0, 50, {3, 4}), ex("M3", 10, 3, 10, {0, 0})});
    const std::vector<double> q{9, 9};
    const auto p = s.predict(q, 10, 2, nullptr, kDefault);
    EXPECT_DOUBLE_EQ(p.value, 120.0);
    EXPECT_EQ(p.relaxation, Relaxation::Exact);
    EXPECT_EQ(p.candidates, 1u);
}

TEST(Knn, EquidistantNeighboursAverage) {
    const KnnStore s({ex("M1", 10, 2, 100, {-1}), ex("M2", 10, 2, 140, {1})});
    const std::vector<double> q{0};
    EXPECT_NEAR(s.predict(q, 10, 2, nullptr, kDefault).value, 120.0, 1e-12);
}

TEST(Knn, ExactMatchDominatesWithSmallEpsilon) {
    const KnnStore s({ex("M1", 10, 2, 100, {0, 0}), ex("M2", 10, 2, 200, {5, 5})});
    const std::vector<double> q{0, 0};
    EXPECT_NEAR(s.predict(q, 10, 2, nullptr, kDefault).value, 100.0, 1e-3);
}

TEST(Knn, MatchesBruteForceOracle) {
    const auto store = league_examples(30, 3, 1);
    const KnnStore s(store);
    std::mt19937_64 gen(1);
    for (int t = 0; t < 200; ++t) {
        const auto& q = store[gen() % store.size()];
        const auto p = s.predict(q.x, q.overs_remaining, q.wickets_lost, &q.match_id, kDefault);
        if (p.relaxation != Relaxation::Exact) continue;
        const double o = camp::oracle::brute_knn(store, q.x, q.overs_remaining, q.wickets_lost, &q.match_id, 1e-6);
        EXPECT_NEAR(p.value, o, 1e-9 * std::max(1.0, o));
    }
}

TEST(Knn, PredictionWithinCandidateRange) {
    const auto store = league_examples(25, 8, 2);
    const KnnStore s(store);
    for (std::size_t i = 0; i < store.size(); i += 13) {
        const auto& q = store[i];
        KnnParams np = kDefault;
        np.leave_one_out = false;
        const auto p = s.predict(q.x, q.overs_remaining, q.wickets_lost, nullptr, np);
        ASSERT_EQ(p.relaxation, Relaxation::Exact);
        double lo = 1e300;
        double hi = -1e300;
        for (const auto& e : store)
            if (e.overs_remaining == q.overs_remaining && e.wickets_lost == q.wickets_lost) {
                lo = std::min(lo, e.actual_remaining);
                hi = std::max(hi, e.actual_remaining);
            }
        EXPECT_GE(p.value, lo - 1e-9);
        EXPECT_LE(p.value, hi + 1e-9);
    }
}

TEST(Knn, LeaveOneOutExcludesWholeMatch) {
    const KnnStore s({ex("M1", 10, 2, 500, {0}), ex("M2", 10, 2, 100, {3}), ex("M1", 20, 1, 7, {1})});
    const std::vector<double> q{0};
    const MatchId self = "M1";
    EXPECT_DOUBLE_EQ(s.predict(q, 10, 2, &self, kDefault).value, 100.0);
    KnnParams keep = kDefault;
    keep.leave_one_out = false;
    EXPECT_GT(s.predict(q, 10, 2, &self, keep).value, 400.0);
}

TEST(Knn, RelaxationLadder) {
    const KnnStore s({ex("M1", 10, 2, 100, {0}), ex("M2", 12, 2, 200, {0}), ex("M3", 30, 5, 40, {0})});
    const std::vector<double> q{0};
    auto p = s.predict(q, 11, 2, nullptr, kDefault);
    EXPECT_EQ(p.relaxation, Relaxation::OversPlusMinusOne);
    EXPECT_NEAR(p.value, 150.0, 1e-9);
    p = s.predict(q, 11, 3, nullptr, kDefault);
    EXPECT_EQ(p.relaxation, Relaxation::WicketsPlusMinusOne);
    EXPECT_EQ(p.candidates, 2u);
    p = s.predict(q, 40, 9, nullptr, kDefault);
    EXPECT_EQ(p.relaxation, Relaxation::Global);
    EXPECT_EQ(p.candidates, 3u);
    EXPECT_NEAR(p.value, 340.0 / 3.0, 1e-9);
}

TEST(Knn, MaxNeighborsAndSoftmax) {
    const KnnStore s({ex("M1", 10, 2, 100, {0}), ex("M2", 10, 2, 200, {1}), ex("M3", 10, 2, 300, {10})});
    const std::vector<double> q{0.1};
    KnnParams one = kDefault;
    one.max_neighbors = 1;
    EXPECT_DOUBLE_EQ(s.predict(q, 10, 2, nullptr, one).value, 100.0);

    KnnParams soft = kDefault;
    soft.weighting = KnnWeighting::Softmax;
    soft.softmax_temperature = 1e-3;
    EXPECT_NEAR(s.predict(q, 10, 2, nullptr, soft).value, 100.0, 1e-6);
    soft.softmax_temperature = 1e9;
    EXPECT_NEAR(s.predict(q, 10, 2, nullptr, soft).value, 200.0, 1e-3);
}

TEST(Knn, StoreValidation) {
    EXPECT_THROW(KnnStore(std::vector<TrainingExample>{}), ValidationError);
    EXPECT_THROW(KnnStore({ex("M1", 10, 2, 1, {0}, 1), ex("M2", 10, 2, 1, {0}, 2)}), ValidationError);
    const KnnStore s({ex("M1", 10, 2, 1, {0})});
    const MatchId self = "M1";
    const std::vector<double> q{0};
    EXPECT_THROW((void)s.predict(q, 10, 2, &self, kDefault), ValidationError);
}

TEST(Ridge, RecoversExactLine) {
    std::vector<std::vector<double>> x;
    std::vector<double> y;
    for (int i = 0; i < 20; ++i) {
        x.push_back({static_cast<double>(i)});
        y.push_back(2.0 * i + 1.0);
    }
    const auto m = ridge_fit(x, y, 0.0);
    EXPECT_NEAR(m.coefficients[0], 2.0, 1e-9);
    EXPECT_NEAR(m.intercept, 1.0, 1e-9);
    const std::vector<double> q{100};
    EXPECT_NEAR(m.decision(q), 201.0, 1e-7);
    const std::vector<double> neg{-10};
    EXPECT_EQ(m.predict(neg), 0.0);
}

TEST(Ridge, LargeLambdaShrinksToMean) {
    std::vector<std::vector<double>> x{{1, 5}, {2, 3}, {3, 8}, {4, 1}};
    std::vector<double> y{10, 20, 30, 40};
    const auto m = ridge_fit(x, y, 1e12);
    for (double b : m.coefficients) EXPECT_NEAR(b, 0.0, 1e-8);
    EXPECT_NEAR(m.decision(x[0]), 25.0, 1e-6);
    EXPECT_EQ(m.intercept_standardized, 25.0);
}

TEST(Ridge, AgreesWithNormalEquationsOracle) {
    std::mt19937_64 gen(4);
    std::normal_distribution<double> nd(0, 1);
    for (double lambda : {0.0, 0.5, 3.0, 100.0}) {
        std::vector<std::vector<double>> x;
        std::vector<double> y;
        for (int i = 0; i < 80; ++i) {
            std::vector<double> r{nd(gen) * 10 + 50, nd(gen), nd(gen) * 0.01, nd(gen) * 3 - 7};
            y.push_back(3 * r[0] - 2 * r[1] + 100 * r[2] + nd(gen));
            x.push_back(r);
        }
        const auto m = ridge_fit(x, y, lambda);
        const auto o = camp::oracle::normal_equations(x, y, lambda);
        EXPECT_NEAR(m.intercept, o.intercept, 1e-6 * std::max(1.0, std::abs(o.intercept)));
        for (std::size_t j = 0; j < o.beta.size(); ++j)
            EXPECT_NEAR(m.coefficients[j], o.beta[j], 1e-6 * std::max(1.0, std::abs(o.beta[j])));
    }
}

TEST(Ridge, PredictionsInvariantToAffineFeatureRescaling) {
    std::mt19937_64 gen(6);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<std::vector<double>> x;
    std::vector<std::vector<double>> xs;
    std::vector<double> y;
    for (int i = 0; i < 40; ++i) {
        const double a = u(gen);
        const double b = u(gen);
        x.push_back({a, b});
        xs.push_back({1000 * a - 7, 0.01 * b + 3});
        y.push_back(5 * a + b + u(gen));
    }
    const auto m = ridge_fit(x, y, 2.0);
    const auto ms = ridge_fit(xs, y, 2.0);
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(m.decision(x[i]), ms.decision(xs[i]), 1e-8);
}

TEST(Ridge, ZeroVarianceColumnGetsZeroWeight) {
    std::vector<std::vector<double>> x{{1, 7}, {2, 7}, {3, 7}};
    std::vector<double> y{1, 2, 3};
    const auto m = ridge_fit(x, y, 0.0);
    EXPECT_EQ(m.coefficients[1], 0.0);
    EXPECT_NEAR(m.coefficients[0], 1.0, 1e-12);
}

TEST(Ridge, CollinearAtLambdaZeroIsErrorButPenalisedIsFine) {
    std::vector<std::vector<double>> x{{1, 2}, {2, 4}, {3, 6}, {4, 8}};
    std::vector<double> y{1, 2, 3, 5};
    EXPECT_THROW((void)ridge_fit(x, y, 0.0), ValidationError);
    EXPECT_NO_THROW((void)ridge_fit(x, y, 1.0));
    EXPECT_THROW((void)ridge_fit(x, y, -1.0), ValidationError);
    EXPECT_THROW((void)ridge_fit(std::span(x).first(1), std::span(y).first(1), 1.0), ValidationError);
}

TEST(Ridge, JsonRoundTrip) {
    std::vector<std::vector<double>> x{{1, 5}, {2, 3}, {3, 8}, {4, 1}};
    std::vector<double> y{10, 20, 30, 41};
    const auto m = ridge_fit(x, y, 0.7);
    const nlohmann::json j = m;
    const auto back = j.get<RidgeModel>();
    for (const auto& r : x) EXPECT_EQ(back.decision(r), m.decision(r));
}

TEST(Forest, ConstantTargetPredictsConstant) {
    std::vector<std::vector<double>> x;
    std::vector<double> y;
    for (int i = 0; i < 50; ++i) {
        x.push_back({static_cast<double>(i), static_cast<double>(i % 7)});
        y.push_back(42.0);
    }
    const auto f = forest_fit(x, y, ForestParams{10, 12, 2, 1.0, 3});
    for (const auto& r : x) EXPECT_EQ(f.predict(r), 42.0);
    for (const auto& t : f.trees) EXPECT_EQ(t.nodes.size(), 1u);
}

TEST(Forest, DepthZeroTreeIsBootstrapMean) {
    std::vector<std::vector<double>> x{{0}, {1}, {2}, {3}, {4}};
    std::vector<double> y{1, 2, 4, 8, 16};
    const ForestParams p{1, 0, 1, 1.0, 11};
    const auto f = forest_fit(x, y, p);
    Rng rng(derive_seed(11, 0));
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) sum += y[uniform_index(rng, x.size())];
    EXPECT_NEAR(f.predict(x[0]), sum / 5.0, 1e-12);

    Rng r2(1);
    const std::vector<std::size_t> sample{0, 0, 4};
    const auto t = fit_tree(x, y, sample, p, r2);
    EXPECT_NEAR(t.predict(x[2]), 6.0, 1e-12);
}

TEST(Forest, StepFunctionBeatsRidge) {
    std::mt19937_64 gen(2);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<std::vector<double>> x;
    std::vector<double> y;
    for (int i = 0; i < 300; ++i) {
        const double a = u(gen);
        x.push_back({a, u(gen)});
        y.push_back(a > 0.5 ? 100.0 : 10.0);
    }
    const auto f = forest_fit(x, y, ForestParams{30, 6, 5, 1.0, 1});
    const auto r = ridge_fit(x, y, 1.0);
    double ef = 0.0;
    double er = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double a = u(gen);
        const std::vector<double> q{a, u(gen)};
        const double truth = a > 0.5 ? 100.0 : 10.0;
        ef += std::abs(f.predict(q) - truth);
        er += std::abs(r.predict(q) - truth);
    }
    EXPECT_LT(ef, 0.5 * er);
}

TEST(Forest, DeterministicPerSeedAndDepthBounded) {
    const auto ex = league_examples(10, 1, 1);
    std::vector<std::vector<double>> x;
    std::vector<double> y;
    for (const auto& e : ex) {
        x.push_back(e.x);
        y.push_back(e.actual_remaining);
    }
    const ForestParams p{8, 4, 5, 1.0 / 3.0, 77};
    const auto a = forest_fit(x, y, p);
    const auto b = forest_fit(x, y, p);
    EXPECT_EQ(nlohmann::json(a).dump(), nlohmann::json(b).dump());
    for (const auto& t : a.trees) EXPECT_LE(t.depth(), 4);
    const auto back = nlohmann::json(a).get<ForestModel>();
    for (std::size_t i = 0; i < x.size(); i += 17) EXPECT_EQ(back.predict(x[i]), a.predict(x[i]));
    auto q = p;
    q.seed = 78;
    EXPECT_NE(nlohmann::json(forest_fit(x, y, q)).dump(), nlohmann::json(a).dump());
}

TEST(Forest, ParameterValidation) {
    std::vector<std::vector<double>> x{{0}, {1}};
    std::vector<double> y{0, 1};
    EXPECT_THROW((void)forest_fit(x, y, ForestParams{0}), ValidationError);
    EXPECT_THROW((void)forest_fit(x, y, ForestParams{1, 2, 1, 0.0}), ValidationError);
    EXPECT_THROW((void)forest_fit(x, y, ForestParams{1, 2, 5}), ValidationError);
}

TEST(TrainingExamples, OnePerOverWithActualRemaining) {
    const auto ms = camp::test::synthetic_matches(6, 2);
    const auto c = simple_clusters(ms);
    const auto e = build_training_examples(ms, c, 2);
    std::size_t overs = 0;
    for (const auto& m : ms) overs += m.innings_overs(2).size();
    ASSERT_EQ(e.size(), overs);
    for (const auto& t : e) {
        EXPECT_EQ(t.innings, 2);
        EXPECT_EQ(t.overs_remaining, 51 - t.boundary);
        EXPECT_GT(t.target, 0);
        EXPECT_GE(t.actual_remaining, 0.0);
    }
    const auto text = training_examples_csv(e);
    std::istringstream in(text);
    const auto back = parse_training_examples(in, "x.csv");
    ASSERT_EQ(back.size(), e.size());
    EXPECT_EQ(training_examples_csv(back), text);
}

TEST(ProjectInnings, TraceEndsInZero) {
    const auto ms = camp::test::synthetic_matches(12, 4);
    const auto c = simple_clusters(ms);
    const auto model = fit_projection(build_training_examples(ms, c, 1), 1, ProjectionConfig{}, 0);
    const auto r = project_innings(ms[0], 1, c, model);
    EXPECT_EQ(r.size(), 51u);
    EXPECT_EQ(r.back(), 0.0);
    for (double v : r) EXPECT_GE(v, 0.0);
    EXPECT_THROW((void)project_innings(ms[0], 2, c, model), ValidationError);
}

TEST(Folds, GroupedBalancedDeterministic) {
    const auto e = league_examples(23, 5, 1);
    const auto f = assign_folds(e, 5, 9);
    EXPECT_EQ(f.size(), 23u);
    std::vector<int> sizes(5, 0);
    for (const auto& [m, k] : f) ++sizes[static_cast<std::size_t>(k)];
    EXPECT_LE(*std::max_element(sizes.begin(), sizes.end()) - *std::min_element(sizes.begin(), sizes.end()), 1);
    EXPECT_EQ(assign_folds(e, 5, 9), f);
    EXPECT_THROW((void)assign_folds(e, 1, 9), ValidationError);
    EXPECT_THROW((void)assign_folds(e, 24, 9), ValidationError);
}

TEST(CrossFit, PredictionsIgnoreOwnMatchTargets) {
    auto e = league_examples(15, 6, 1);
    for (auto kind : {ModelKind::Ridge, ModelKind::Knn}) {
        ProjectionConfig cfg;
        cfg.kind = kind;
        const auto base = cross_fit_predictions(e, cfg, 3);
        auto tampered = e;
        const MatchId victim = e.front().match_id;
        for (auto& t : tampered)
            if (t.match_id == victim) t.actual_remaining += 1000.0;
        const auto again = cross_fit_predictions(tampered, cfg, 3);
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i].match_id == victim) {
                EXPECT_EQ(again[i], base[i]);
            }
    }
}

TEST(MaeCurve, PerfectAndConstantPredictors) {
    const auto e = league_examples(10, 7, 1);
    std::vector<double> perfect;
    for (const auto& t : e) perfect.push_back(t.actual_remaining);
    const auto c0 = mae_curve("perfect", 1, e, perfect);
    for (std::size_t o = 0; o < c0.mae.size(); ++o)
        if (c0.n[o]) {
            EXPECT_EQ(*c0.mae[o], 0.0);
        }

    const std::vector<double> flat(e.size(), 235.0);
    const auto c = mae_curve("flat", 1, e, flat);
    for (int over = 1; over <= 50; ++over) {
        double s = 0.0;
        int n = 0;
        for (const auto& t : e)
            if (t.boundary == over) {
                s += std::abs(235.0 - t.actual_remaining);
                ++n;
            }
        const auto idx = static_cast<std::size_t>(over - 1);
        ASSERT_EQ(c.n[idx], static_cast<std::size_t>(n));
        if (n) EXPECT_NEAR(*c.mae[idx], s / n, 1e-9);
        else EXPECT_FALSE(c.mae[idx].has_value());
    }
}

TEST(MaeCurve, CsvHasFiftyRowsPerCurveAndBlankAbsent) {
    std::vector<TrainingExample> e{ex("M1", 50, 0, 10, {0}), ex("M2", 49, 0, 20, {0})};
    const std::vector<double> p{12, 17};
    const std::vector<MaeCurve> curves{mae_curve("knn", 1, e, p), mae_curve("knn", 2, e, p)};
    const auto text = mae_csv(curves);
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 101);
    EXPECT_NE(text.find("knn,1,1,2,1\n"), std::string::npos);
    EXPECT_NE(text.find("knn,1,2,3,1\n"), std::string::npos);
    EXPECT_NE(text.find("knn,1,3,,0\n"), std::string::npos);
    EXPECT_NE(text.find("knn,2,1,,0\n"), std::string::npos);
}

TEST(KfoldEvaluate, CurvesForPresentInningsOnly) {
    auto e = league_examples(8, 2, 2);
    ProjectionConfig cfg;
    cfg.kind = ModelKind::Ridge;
    const auto r = kfold_evaluate(e, cfg, 1);
    ASSERT_EQ(r.curves.size(), 1u);
    EXPECT_EQ(r.curves[0].innings, 2);
    EXPECT_EQ(r.curves[0].model, "ridge");
    EXPECT_EQ(r.traces.size(), e.size());
}

TEST(Traces, TableChecksContiguityAndTerminal) {
    const auto ms = camp::test::synthetic_matches(6, 3);
    const auto tr = cross_fit_traces(ms, simple_clusters(ms), ProjectionConfig{}, 1);
    const auto table = to_trace_table(tr);
    EXPECT_EQ(table.size(), 12u);
    for (const auto& [k, v] : table) {
        EXPECT_EQ(v.back(), 0.0);
    }
    std::istringstream in(traces_csv(tr));
    EXPECT_EQ(traces_csv(parse_traces(in, "t.csv")), traces_csv(tr));

    auto gap = tr;
    gap.erase(gap.begin() + 3);
    EXPECT_THROW((void)to_trace_table(gap), ValidationError);
    auto noterm = std::vector<ProjectionTrace>(tr.begin(), tr.begin() + 5);
    EXPECT_THROW((void)to_trace_table(noterm), ValidationError);
}
