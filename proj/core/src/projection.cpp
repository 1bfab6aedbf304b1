#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "camp/csv.hpp"
#include "camp/projection.hpp"

namespace camp {

std::string_view to_string(ModelKind k) noexcept {
    switch (k) {
        case ModelKind::Knn: return "knn";
        case ModelKind::Ridge: return "ridge";
        case ModelKind::Forest: return "forest";
    }
    return "knn";
}

ModelKind parse_model_kind(std::string_view s) {
    if (s == "knn") return ModelKind::Knn;
    if (s == "ridge") return ModelKind::Ridge;
    if (s == "forest" || s == "random_forest") return ModelKind::Forest;
    throw ValidationError("unknown model kind '" + std::string(s) + "' (expected knn, ridge or forest)");
}

// --- training examples ------------------------------------------------------

namespace {

TrainingExample example_from_stage(const Match& m, const StageVector& s, int total) {
    TrainingExample e;
    e.match_id = m.id();
    e.innings = s.innings;
    e.boundary = s.boundary;
    e.overs_remaining = s.overs_remaining;
    e.wickets_lost = s.wickets_lost;
    e.runs_so_far = s.runs_so_far;
    e.target = s.innings == 2 ? m.summary.target_runs() : 0;
    e.actual_remaining = static_cast<double>(total - s.runs_so_far);
    e.x = s.features();
    return e;
}

const std::vector<std::string> kExampleColumns{"match_id", "innings",      "boundary", "overs_remaining",
                                               "wickets_lost", "runs_so_far", "target", "actual_remaining"};

}  // namespace

std::vector<TrainingExample> build_training_examples(std::span<const Match> matches,
                                                     const ClusterAssignments& clusters, int innings) {
    std::vector<TrainingExample> out;
    for (const auto& m : matches) {
        const auto stages = build_stage_vectors(m, innings, clusters);
        const int total = stages.back().runs_so_far;
        for (std::size_t b = 0; b + 1 < stages.size(); ++b) out.push_back(example_from_stage(m, stages[b], total));
    }
    return out;
}

std::string training_examples_csv(std::span<const TrainingExample> examples) {
    std::vector<std::string> header = kExampleColumns;
    const std::size_t dim = examples.empty() ? 0 : examples.front().x.size();
    for (std::size_t j = 0; j < dim; ++j) header.push_back("x" + std::to_string(j + 1));
    std::string out = csv::join(header) + "\n";
    for (const auto& e : examples) {
        if (e.x.size() != dim) throw ValidationError("training_examples_csv: ragged feature rows");
        std::vector<std::string> row{e.match_id,
                                     std::to_string(e.innings),
                                     std::to_string(e.boundary),
                                     std::to_string(e.overs_remaining),
                                     std::to_string(e.wickets_lost),
                                     std::to_string(e.runs_so_far),
                                     std::to_string(e.target),
                                     format_double(e.actual_remaining)};
        for (double v : e.x) row.push_back(format_double(v));
        out += csv::join(row) + "\n";
    }
    return out;
}

std::vector<TrainingExample> parse_training_examples(std::istream& in, const std::string& source) {
    std::string first;
    if (!std::getline(in, first)) throw ParseError(source, 1, "missing header");
    const auto header = csv::split_line(first);
    if (header.size() < kExampleColumns.size() ||
        !std::equal(kExampleColumns.begin(), kExampleColumns.end(), header.begin())) {
        throw ParseError(source, 1, "header must start with " + csv::join(kExampleColumns));
    }
    std::stringstream rest;
    rest << first << "\n" << in.rdbuf();
    std::vector<TrainingExample> out;
    for (const auto& row : csv::read(rest, source, header)) {
        try {
            const auto& f = row.fields;
            TrainingExample e;
            e.match_id = f[0];
            e.innings = static_cast<int>(parse_int(f[1], "innings"));
            e.boundary = static_cast<int>(parse_int(f[2], "boundary"));
            e.overs_remaining = static_cast<int>(parse_int(f[3], "overs_remaining"));
            e.wickets_lost = static_cast<int>(parse_int(f[4], "wickets_lost"));
            e.runs_so_far = static_cast<int>(parse_int(f[5], "runs_so_far"));
            e.target = static_cast<int>(parse_int(f[6], "target"));
            e.actual_remaining = parse_double(f[7], "actual_remaining");
            for (std::size_t j = kExampleColumns.size(); j < f.size(); ++j) e.x.push_back(parse_double(f[j], "x"));
            out.push_back(std::move(e));
        } catch (const ParseError&) {
            throw;
        } catch (const ValidationError& e) {
            throw ParseError(source, row.line, e.what());
        }
    }
    return out;
}

// --- unified model ----------------------------------------------------------

double ProjectionModel::predict(const TrainingExample& q) const {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, KnnStore>) {
                return s.predict(q.x, q.overs_remaining, q.wickets_lost, &q.match_id, knn_params).value;
            } else {
                return s.predict(q.x);
            }
        },
        state);
}

ProjectionModel fit_projection(std::vector<TrainingExample> examples, int innings, const ProjectionConfig& config,
                               std::uint64_t seed) {
    if (innings != 1 && innings != 2) throw ValidationError("fit_projection: innings must be 1 or 2");
    std::erase_if(examples, [&](const auto& e) { return e.innings != innings; });
    if (examples.empty()) {
        throw ValidationError("fit_projection: no training examples for innings " + std::to_string(innings));
    }
    ProjectionModel m;
    m.kind = config.kind;
    m.innings = innings;
    m.knn_params = config.knn;
    if (config.kind == ModelKind::Knn) {
        m.state = KnnStore(std::move(examples));
        return m;
    }
    std::vector<std::vector<double>> x;
    std::vector<double> y;
    x.reserve(examples.size());
    y.reserve(examples.size());
    for (auto& e : examples) {
        x.push_back(std::move(e.x));
        y.push_back(e.actual_remaining);
    }
    if (config.kind == ModelKind::Ridge) {
        m.state = ridge_fit(x, y, config.lambda);
    } else {
        ForestParams p = config.forest;
        p.seed = seed;
        m.state = forest_fit(x, y, p);
    }
    return m;
}

std::vector<double> project_innings(const Match& match, int innings, const ClusterAssignments& clusters,
                                    const ProjectionModel& model) {
    if (model.innings != innings) {
        throw ValidationError("project_innings: model trained for innings " + std::to_string(model.innings) +
                              ", asked for innings " + std::to_string(innings));
    }
    if (match.innings_overs(innings).empty()) {
        throw ValidationError("project_innings: " + match.id() + " innings " + std::to_string(innings) +
                              " has no overs");
    }
    const auto stages = build_stage_vectors(match, innings, clusters);
    const int total = stages.back().runs_so_far;
    std::vector<double> r;
    r.reserve(stages.size());
    for (std::size_t b = 0; b + 1 < stages.size(); ++b) r.push_back(model.predict(example_from_stage(match, stages[b], total)));
    r.push_back(0.0);
    return r;
}

// --- cross-fitting ----------------------------------------------------------

std::map<MatchId, int> assign_folds(std::span<const TrainingExample> examples, int k_folds, std::uint64_t seed) {
    if (k_folds < 2) throw ValidationError("k_folds must be >= 2");
    std::set<MatchId> ids;
    for (const auto& e : examples) ids.insert(e.match_id);
    std::vector<MatchId> order(ids.begin(), ids.end());
    if (order.size() < static_cast<std::size_t>(k_folds)) {
        throw ValidationError("k-fold: " + std::to_string(order.size()) + " matches, fewer than k_folds=" +
                              std::to_string(k_folds));
    }
    Rng rng(seed);
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[uniform_index(rng, i)]);
    std::map<MatchId, int> fold;
    for (std::size_t i = 0; i < order.size(); ++i) fold[order[i]] = static_cast<int>(i % static_cast<std::size_t>(k_folds));
    return fold;
}

std::vector<double> cross_fit_predictions(std::span<const TrainingExample> examples, const ProjectionConfig& config,
                                          std::uint64_t seed) {
    std::vector<double> pred(examples.size(), 0.0);
    if (examples.empty()) return pred;
    std::map<MatchId, int> folds;
    if (config.kind != ModelKind::Knn) folds = assign_folds(examples, config.k_folds, derive_seed(seed, 0));

    for (int inn = 1; inn <= 2; ++inn) {
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < examples.size(); ++i)
            if (examples[i].innings == inn) rows.push_back(i);
        if (rows.empty()) continue;

        if (config.kind == ModelKind::Knn) {
            std::vector<TrainingExample> train;
            for (auto i : rows) train.push_back(examples[i]);
            const auto model = fit_projection(std::move(train), inn, config, seed);
            for (auto i : rows) pred[i] = model.predict(examples[i]);
            continue;
        }
        for (int f = 0; f < config.k_folds; ++f) {
            std::vector<TrainingExample> train;
            std::vector<std::size_t> test;
            for (auto i : rows) {
                if (folds.at(examples[i].match_id) == f) {
                    test.push_back(i);
                } else {
                    train.push_back(examples[i]);
                }
            }
            if (test.empty()) continue;
            const auto fold_seed = derive_seed(seed, static_cast<std::uint64_t>(1 + inn * 64 + f));
            const auto model = fit_projection(std::move(train), inn, config, fold_seed);
            for (auto i : test) pred[i] = model.predict(examples[i]);
        }
    }
    return pred;
}

MaeCurve mae_curve(std::string model, int innings, std::span<const TrainingExample> examples,
                   std::span<const double> predictions) {
    if (examples.size() != predictions.size()) throw ValidationError("mae_curve: prediction count mismatch");
    MaeCurve c;
    c.model = std::move(model);
    c.innings = innings;
    std::array<double, kOversPerInnings> sum{};
    for (std::size_t i = 0; i < examples.size(); ++i) {
        const auto& e = examples[i];
        if (e.innings != innings) continue;
        if (e.boundary < 1 || e.boundary > kOversPerInnings) continue;
        const auto o = static_cast<std::size_t>(e.boundary - 1);
        sum[o] += std::abs(predictions[i] - e.actual_remaining);
        c.n[o] += 1;
    }
    for (std::size_t o = 0; o < c.mae.size(); ++o)
        if (c.n[o] > 0) c.mae[o] = sum[o] / static_cast<double>(c.n[o]);
    return c;
}

ProjectionReport kfold_evaluate(std::span<const TrainingExample> examples, const ProjectionConfig& config,
                                std::uint64_t seed) {
    ProjectionReport r;
    const auto pred = cross_fit_predictions(examples, config, seed);
    for (int inn = 1; inn <= 2; ++inn) {
        const bool present = std::any_of(examples.begin(), examples.end(), [&](const auto& e) { return e.innings == inn; });
        if (present) r.curves.push_back(mae_curve(std::string(to_string(config.kind)), inn, examples, pred));
    }
    for (std::size_t i = 0; i < examples.size(); ++i) {
        const auto& e = examples[i];
        r.traces.push_back({e.match_id, e.innings, e.boundary, e.runs_so_far, pred[i], e.actual_remaining});
    }
    return r;
}

std::string mae_csv(std::span<const MaeCurve> curves) {
    std::string out = "model,innings,over,mae,n\n";
    for (const auto& c : curves)
        for (std::size_t o = 0; o < c.mae.size(); ++o) {
            out += csv::join({c.model, std::to_string(c.innings), std::to_string(o + 1),
                              c.mae[o] ? format_double(*c.mae[o]) : std::string(), std::to_string(c.n[o])});
            out += "\n";
        }
    return out;
}

// --- traces -----------------------------------------------------------------

namespace {
const std::vector<std::string> kTraceHeader{"match_id",  "innings", "boundary", "runs_so_far",
                                            "projected_remaining", "actual_remaining"};
}

std::string traces_csv(std::span<const ProjectionTrace> traces) {
    std::string out = csv::join(kTraceHeader) + "\n";
    for (const auto& t : traces) {
        out += csv::join({t.match_id, std::to_string(t.innings), std::to_string(t.boundary),
                          std::to_string(t.runs_so_far), format_double(t.predicted), format_double(t.actual)});
        out += "\n";
    }
    return out;
}

std::vector<ProjectionTrace> parse_traces(std::istream& in, const std::string& source) {
    std::vector<ProjectionTrace> out;
    for (const auto& row : csv::read(in, source, kTraceHeader)) {
        try {
            const auto& f = row.fields;
            ProjectionTrace t;
            t.match_id = f[0];
            t.innings = static_cast<int>(parse_int(f[1], "innings"));
            t.boundary = static_cast<int>(parse_int(f[2], "boundary"));
            t.runs_so_far = static_cast<int>(parse_int(f[3], "runs_so_far"));
            t.predicted = parse_double(f[4], "projected_remaining");
            t.actual = parse_double(f[5], "actual_remaining");
            out.push_back(std::move(t));
        } catch (const ParseError&) {
            throw;
        } catch (const ValidationError& e) {
            throw ParseError(source, row.line, e.what());
        }
    }
    return out;
}

TraceTable to_trace_table(std::span<const ProjectionTrace> traces) {
    TraceTable t;
    for (const auto& tr : traces) {
        auto& v = t[{tr.match_id, tr.innings}];
        if (tr.boundary != static_cast<int>(v.size()) + 1) {
            throw ValidationError("projection traces for " + tr.match_id + " innings " + std::to_string(tr.innings) +
                                  ": expected boundary " + std::to_string(v.size() + 1) + ", got " +
                                  std::to_string(tr.boundary));
        }
        v.push_back(tr.predicted);
    }
    for (const auto& [key, v] : t) {
        if (v.size() < 2 || v.back() != 0.0) {
            throw ValidationError("projection traces for " + key.first + " innings " + std::to_string(key.second) +
                                  " must end with a terminal boundary projected at 0");
        }
    }
    return t;
}

std::vector<ProjectionTrace> cross_fit_traces(std::span<const Match> matches, const ClusterAssignments& clusters,
                                              const ProjectionConfig& config, std::uint64_t seed) {
    std::vector<TrainingExample> examples;
    for (int inn = 1; inn <= 2; ++inn) {
        auto e = build_training_examples(matches, clusters, inn);
        examples.insert(examples.end(), std::make_move_iterator(e.begin()), std::make_move_iterator(e.end()));
    }
    const auto pred = cross_fit_predictions(examples, config, seed);

    std::map<std::pair<MatchId, int>, std::vector<ProjectionTrace>> grouped;
    for (std::size_t i = 0; i < examples.size(); ++i) {
        const auto& e = examples[i];
        grouped[{e.match_id, e.innings}].push_back(
            {e.match_id, e.innings, e.boundary, e.runs_so_far, pred[i], e.actual_remaining});
    }
    std::vector<ProjectionTrace> out;
    for (const auto& m : matches) {
        for (int inn = 1; inn <= 2; ++inn) {
            auto& g = grouped[{m.id(), inn}];
            if (g.empty()) throw ValidationError("cross_fit_traces: " + m.id() + " innings " + std::to_string(inn) + " has no overs");
            const int total = g.front().runs_so_far + static_cast<int>(g.front().actual);
            out.insert(out.end(), g.begin(), g.end());
            out.push_back({m.id(), inn, static_cast<int>(g.size()) + 1, total, 0.0, 0.0});
        }
    }
    return out;
}

}  // namespace camp
