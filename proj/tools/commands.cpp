#include "commands.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "camp/csv.hpp"
#include "camp/evaluation.hpp"
#include "camp/lnc.hpp"

namespace camp::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kDataDir = "data";
constexpr const char* kIngestDir = "ingest";
constexpr const char* kFeaturesDir = "features";
constexpr const char* kClustersDir = "clusters";
constexpr const char* kProjectionDir = "projection";
constexpr const char* kRatingsDir = "ratings";
constexpr const char* kBaselineDir = "baseline";
constexpr const char* kEvaluationDir = "evaluation";

std::string dump(const json& j) { return j.dump(2) + "\n"; }

/// Relative to the output directory when inside it, so manifests do not depend on where --out points.
std::string display_path(const Context& ctx, const fs::path& p) {
    const auto rel = p.lexically_relative(ctx.out);
    if (!rel.empty() && *rel.begin() != "..") return rel.generic_string();
    return p.generic_string();
}

/// Collects the inputs and outputs of one command and writes its manifest last.
class Stage {
public:
    Stage(const Context& ctx, std::string command, const char* dir)
        : ctx_(ctx), command_(std::move(command)), dir_(ctx.out / dir) {}

    /// Reads an artifact another command produced.
    std::string artifact(const char* dir, const std::string& name, const char* producer) {
        const auto p = ctx_.out / dir / name;
        if (!fs::exists(p)) {
            throw IoError("missing " + p.string() + "; run `camp " + producer + "` first");
        }
        auto text = csv::read_file(p);
        record(inputs_, std::string(dir) + "/" + name, text);
        return text;
    }

    /// Reads a user-supplied file.
    std::string external(const fs::path& p) {
        auto text = csv::read_file(p);
        record(inputs_, display_path(ctx_, p), text);
        return text;
    }

    void write(const std::string& name, const std::string& contents) {
        csv::write_file_atomic(dir_ / name, contents);
        record(outputs_, name, contents);
    }

    void finish() {
        json seeds{{"root", ctx_.seeds.root},
                   {"simulate", ctx_.seeds.simulate},
                   {"clustering", ctx_.seeds.clustering},
                   {"projection", ctx_.seeds.projection},
                   {"evaluation", ctx_.seeds.evaluation}};
        json m{{"command", command_},
               {"version", std::string(library_version())},
               {"config_hash", ctx_.config_hash},
               {"seeds", seeds},
               {"inputs", inputs_},
               {"outputs", outputs_},
               {"config", canonical_json(ctx_.config)}};
        csv::write_file_atomic(dir_ / "manifest.json", dump(m));
    }

private:
    const Context& ctx_;
    std::string command_;
    fs::path dir_;
    json inputs_ = json::array();
    json outputs_ = json::array();

    static void record(json& list, const std::string& path, const std::string& text) {
        list.push_back({{"path", path}, {"fnv1a64", hex64(fnv1a64(text))}, {"bytes", text.size()}});
    }
};

struct RawPaths {
    fs::path balls;
    fs::path summaries;
    fs::path lineups;
    std::optional<fs::path> venues;
    bool simulated = false;
};

RawPaths raw_paths(const Context& ctx) {
    const auto& c = ctx.config;
    RawPaths r;
    if (c.with_dataset) {
        const fs::path d = *c.with_dataset;
        r.balls = d / "balls.csv";
        r.summaries = d / "matches.csv";
        r.lineups = d / "lineups.csv";
        if (fs::exists(d / "venues.json")) r.venues = d / "venues.json";
    } else if (!c.paths.balls.empty() || !c.paths.summaries.empty() || !c.paths.lineups.empty()) {
        if (c.paths.balls.empty() || c.paths.summaries.empty() || c.paths.lineups.empty()) {
            throw ValidationError("config: paths: balls, summaries and lineups must be set together");
        }
        r.balls = c.paths.balls;
        r.summaries = c.paths.summaries;
        r.lineups = c.paths.lineups;
    } else {
        r.balls = ctx.out / kDataDir / "balls.csv";
        r.summaries = ctx.out / kDataDir / "matches.csv";
        r.lineups = ctx.out / kDataDir / "lineups.csv";
        r.simulated = true;
    }
    if (!c.paths.venue_map.empty()) r.venues = fs::path(c.paths.venue_map);
    for (const auto* p : {&r.balls, &r.summaries, &r.lineups}) {
        if (!fs::exists(*p)) {
            throw IoError("missing " + p->string() +
                          (r.simulated ? "; run `camp simulate` first or set paths.balls, paths.summaries and paths.lineups"
                                       : ""));
        }
    }
    return r;
}

std::vector<Match> load_matches(Stage& st) {
    std::istringstream balls(st.artifact(kIngestDir, "balls.csv", "ingest"));
    std::istringstream summaries(st.artifact(kIngestDir, "matches.csv", "ingest"));
    std::istringstream lineups(st.artifact(kIngestDir, "lineups.csv", "ingest"));
    auto b = parse_balls(balls, "ingest/balls.csv");
    auto s = parse_summaries(summaries, {}, "ingest/matches.csv");
    auto l = parse_lineups(lineups, "ingest/lineups.csv");
    auto res = assemble_matches(b, s, l);
    if (!res.rejected.empty()) {
        throw ValidationError("ingest/matches.csv holds rejected match " + res.rejected.front().match_id +
                              "; rerun `camp ingest`");
    }
    return std::move(res.matches);
}

ClusterModel load_cluster_model(Stage& st, const std::string& name) {
    const auto text = st.artifact(kClustersDir, name, "cluster");
    try {
        return json::parse(text).get<ClusterModel>();
    } catch (const json::exception& e) {
        throw ValidationError("clusters/" + name + ": " + e.what());
    }
}

ClusterAssignments load_assignments(Stage& st) {
    ClusterModels m;
    m.teams = load_cluster_model(st, "teams.json");
    m.batters = load_cluster_model(st, "batters.json");
    m.bowlers = load_cluster_model(st, "bowlers.json");
    return to_assignments(m);
}

std::vector<TrainingExample> load_examples(Stage& st) {
    std::vector<TrainingExample> all;
    for (int inn = 1; inn <= 2; ++inn) {
        const auto name = "examples_inn" + std::to_string(inn) + ".csv";
        std::istringstream in(st.artifact(kProjectionDir, name, "project"));
        auto e = parse_training_examples(in, "projection/" + name);
        all.insert(all.end(), std::make_move_iterator(e.begin()), std::make_move_iterator(e.end()));
    }
    return all;
}

std::vector<RatingReport> load_ratings(Stage& st, const char* dir, const char* producer) {
    std::istringstream in(st.artifact(dir, "ratings.csv", producer));
    return parse_ratings(in, std::string(dir) + "/ratings.csv");
}

ResourceTable resource_table(const Context& ctx, Stage& st) {
    if (ctx.config.paths.resource_table.empty()) return ResourceTable::standard();
    const fs::path p = ctx.config.paths.resource_table;
    std::istringstream in(st.external(p));
    return ResourceTable::from_anchors(parse_resource_anchors(in, p.generic_string()), p.generic_string());
}

json stats_json(const InningsStats& s) {
    return {{"count", s.count}, {"min", s.min}, {"max", s.max}, {"mean", s.mean}, {"std", s.std}};
}

json scoring_json(const ScoringParams& p) {
    return {{"w", p.w},
            {"w_bat", p.w_bat},
            {"w_bowl", p.w_bowl},
            {"byes_against_bowler", p.byes_against_bowler},
            {"scale_final_partial_over", p.scale_final_partial_over}};
}

json knn_params_json(const KnnParams& p) {
    return {{"epsilon", p.epsilon},
            {"max_neighbors", p.max_neighbors ? json(*p.max_neighbors) : json(nullptr)},
            {"weighting", p.weighting == KnnWeighting::Softmax ? "softmax" : "inverse_distance"},
            {"softmax_temperature", p.softmax_temperature},
            {"leave_one_out", p.leave_one_out}};
}

bool involves(const MatchSummary& s, const std::vector<TeamId>& teams) {
    return std::find(teams.begin(), teams.end(), s.team_a) != teams.end() ||
           std::find(teams.begin(), teams.end(), s.team_b) != teams.end();
}

}  // namespace

Context::Context(RunConfig c)
    : config(std::move(c)), seeds(derive_seeds(config.seed)), config_hash(cli::config_hash(config)),
      out(config.paths.out) {}

void cmd_simulate(const Context& ctx) {
    Stage st(ctx, "simulate", kDataDir);
    auto g = ctx.config.simulate;
    g.seed = ctx.seeds.simulate;
    const auto data = generate(g);
    st.write("balls.csv", serialize_balls(data.balls));
    st.write("matches.csv", serialize_summaries(data.summaries));
    st.write("lineups.csv", lineups_csv(data));
    st.write("truth.csv", truth_csv(data.truth));
    st.finish();
}

void cmd_ingest(const Context& ctx) {
    Stage st(ctx, "ingest", kIngestDir);
    const auto raw = raw_paths(ctx);
    VenueMap venues;
    if (raw.venues) venues = parse_venue_map(st.external(*raw.venues));

    std::istringstream bin(st.external(raw.balls));
    std::istringstream sin(st.external(raw.summaries));
    std::istringstream lin(st.external(raw.lineups));
    const auto balls = parse_balls(bin, display_path(ctx, raw.balls));
    auto summaries = parse_summaries(sin, venues, display_path(ctx, raw.summaries));
    const auto lineups = parse_lineups(lin, display_path(ctx, raw.lineups));

    auto assembled = assemble_matches(balls, summaries, lineups);
    auto pre = preprocess_matches(assembled.matches, ctx.config.preprocess);

    std::set<MatchId> kept;
    for (const auto& m : pre.matches) kept.insert(m.id());

    std::string rejected = "match_id,reason\n";
    for (const auto& r : assembled.rejected) rejected += csv::join({r.match_id, r.reason}) + "\n";
    for (const auto& m : assembled.matches) {
        if (kept.count(m.id())) continue;
        const auto reason = involves(m.summary, ctx.config.preprocess.excluded_teams)
                                ? std::string("excluded team")
                                : std::string("innings total outside the sigma band");
        rejected += csv::join({m.id(), reason}) + "\n";
    }

    std::vector<BallEvent> kept_balls;
    for (const auto& b : balls)
        if (kept.count(b.match_id)) kept_balls.push_back(b);
    std::vector<MatchSummary> kept_summaries;
    for (const auto& m : pre.matches) {
        auto s = m.summary;
        s.venue_field.clear();
        kept_summaries.push_back(std::move(s));
    }

    const auto& rep = pre.report;
    json report{{"input_matches", rep.input_matches},
                {"assembled_matches", assembled.matches.size()},
                {"rejected_at_assembly", assembled.rejected.size()},
                {"removed_by_team", rep.removed_by_team},
                {"removed_by_band", rep.removed_by_band},
                {"output_matches", rep.output_matches},
                {"band",
                 {{"innings1", {rep.band.lower[0], rep.band.upper[0]}},
                  {"innings2", {rep.band.lower[1], rep.band.upper[1]}}}},
                {"before", {stats_json(rep.before[0]), stats_json(rep.before[1])}},
                {"after", {stats_json(rep.after[0]), stats_json(rep.after[1])}},
                {"warnings", assembled.warnings}};

    st.write("balls.csv", serialize_balls(kept_balls));
    st.write("matches.csv", serialize_summaries(kept_summaries));
    st.write("lineups.csv", serialize_lineups(pre.matches));
    st.write("rejected.csv", rejected);
    st.write("preprocess_report.json", dump(report));
    st.finish();
}

void cmd_features(const Context& ctx) {
    Stage st(ctx, "features", kFeaturesDir);
    const auto matches = load_matches(st);
    const auto universe = TeamUniverse::from_matches(matches);

    std::vector<TeamFeatures> teams;
    for (const auto& t : universe.teams()) teams.push_back(build_team_features(t, matches, universe));
    const auto team_clusters = team_cluster_map(fit_team_model(teams, ctx.config.clustering, ctx.seeds.clustering));

    std::set<PlayerId> players;
    for (const auto& m : matches)
        for (const auto& side : m.lineups) players.insert(side.begin(), side.end());

    const auto history = extract_player_innings(matches);
    std::map<PlayerId, std::vector<BattingInnings>> bat_by;
    std::map<PlayerId, std::vector<BowlingInnings>> bowl_by;
    for (const auto& b : history.batting) bat_by[b.player].push_back(b);
    for (const auto& b : history.bowling) bowl_by[b.player].push_back(b);

    std::vector<BatterFeatures> batters;
    std::vector<BowlerFeatures> bowlers;
    for (const auto& p : players) {
        batters.push_back(build_batter_features(p, bat_by[p], team_clusters, ctx.config.features));
        bowlers.push_back(build_bowler_features(p, bowl_by[p], team_clusters, ctx.config.features));
    }

    st.write("teams.csv", team_features_csv(teams));
    st.write("batters.csv", batter_features_csv(batters));
    st.write("bowlers.csv", bowler_features_csv(bowlers));
    st.finish();
}

void cmd_cluster(const Context& ctx) {
    Stage st(ctx, "cluster", kClustersDir);
    std::istringstream tin(st.artifact(kFeaturesDir, "teams.csv", "features"));
    std::istringstream bin(st.artifact(kFeaturesDir, "batters.csv", "features"));
    std::istringstream win(st.artifact(kFeaturesDir, "bowlers.csv", "features"));
    const auto teams = parse_team_features(tin, "features/teams.csv");
    const auto batters = parse_batter_features(bin, "features/batters.csv");
    const auto bowlers = parse_bowler_features(win, "features/bowlers.csv");

    const auto models = cluster_all(teams, batters, bowlers, ctx.config.clustering, ctx.seeds.clustering);

    std::string assignments = "kind,id,cluster\n";
    for (const auto* m : {&models.teams, &models.batters, &models.bowlers})
        for (const auto& [id, c] : m->assignments)
            assignments += csv::join({std::string(to_string(m->kind)), id, std::to_string(c)}) + "\n";

    st.write("teams.json", dump(json(models.teams)));
    st.write("batters.json", dump(json(models.batters)));
    st.write("bowlers.json", dump(json(models.bowlers)));
    st.write("assignments.csv", assignments);
    st.finish();
}

void cmd_project(const Context& ctx) {
    Stage st(ctx, "project", kProjectionDir);
    const auto matches = load_matches(st);
    const auto clusters = load_assignments(st);
    const auto& pc = ctx.config.projection;

    for (int inn = 1; inn <= 2; ++inn) {
        auto examples = build_training_examples(matches, clusters, inn);
        const auto examples_name = "examples_inn" + std::to_string(inn) + ".csv";
        st.write(examples_name, training_examples_csv(examples));

        const auto model = fit_projection(std::move(examples), inn, pc, derive_seed(ctx.seeds.projection, 100 + inn));
        json j{{"kind", std::string(to_string(model.kind))}, {"innings", inn}};
        if (const auto* knn = std::get_if<KnnStore>(&model.state)) {
            j["params"] = knn_params_json(model.knn_params);
            j["store"] = examples_name;
            j["n_examples"] = knn->examples().size();
        } else if (const auto* ridge = std::get_if<RidgeModel>(&model.state)) {
            j["model"] = *ridge;
        } else {
            j["model"] = std::get<ForestModel>(model.state);
        }
        st.write("model_inn" + std::to_string(inn) + ".json", dump(j));
    }

    st.write("traces.csv", traces_csv(cross_fit_traces(matches, clusters, pc, ctx.seeds.projection)));
    st.finish();
}

void cmd_rate(const Context& ctx) {
    Stage st(ctx, "rate", kRatingsDir);
    const auto matches = load_matches(st);
    std::istringstream tin(st.artifact(kProjectionDir, "traces.csv", "project"));
    const auto traces = to_trace_table(parse_traces(tin, "projection/traces.csv"));

    std::vector<RatingReport> reports;
    for (const auto& m : matches) reports.push_back(rate_from_traces(m, traces, ctx.config.scoring, "camp"));

    json meta = scoring_json(ctx.config.scoring);
    meta["method"] = "camp";
    meta["model"] = std::string(to_string(ctx.config.projection.kind));
    meta["n_matches"] = reports.size();

    st.write("ratings.csv", ratings_csv(reports));
    st.write("series.csv", series_csv(aggregate_series(reports)));
    st.write("ratings_meta.json", dump(meta));
    st.finish();
}

void cmd_baseline(const Context& ctx) {
    Stage st(ctx, "baseline", kBaselineDir);
    const auto matches = load_matches(st);
    const auto table = resource_table(ctx, st);
    const double par = ctx.config.lnc_par;

    std::vector<RatingReport> reports;
    std::vector<ProjectionTrace> traces;
    for (const auto& m : matches) {
        reports.push_back(lnc_rate_match(m, table, ctx.config.scoring, par));
        for (int inn = 1; inn <= 2; ++inn) {
            const auto r = lnc_trace(m, inn, table, par);
            const auto& overs = m.innings_overs(inn);
            int runs = 0;
            int total = 0;
            for (const auto& o : overs) total += o.runs_total;
            for (std::size_t b = 0; b < r.size(); ++b) {
                traces.push_back({m.id(), inn, static_cast<int>(b) + 1, runs, r[b], static_cast<double>(total - runs)});
                if (b < overs.size()) runs += overs[b].runs_total;
            }
        }
    }

    json meta = scoring_json(ctx.config.scoring);
    meta["method"] = "lnc";
    meta["first_innings_par"] = par;
    meta["resource_table"] = table.provenance().empty() ? std::string("built-in") : table.provenance();
    meta["n_matches"] = reports.size();

    st.write("ratings.csv", ratings_csv(reports));
    st.write("series.csv", series_csv(aggregate_series(reports)));
    st.write("traces.csv", traces_csv(traces));
    st.write("resource_table.csv", resource_table_csv(table));
    st.write("ratings_meta.json", dump(meta));
    st.finish();
}

void cmd_evaluate(const Context& ctx) {
    Stage st(ctx, "evaluate", kEvaluationDir);
    const auto matches = load_matches(st);
    const auto examples = load_examples(st);
    const auto camp_reports = load_ratings(st, kRatingsDir, "rate");
    const auto lnc_reports = load_ratings(st, kBaselineDir, "baseline");
    const auto table = resource_table(ctx, st);

    std::vector<MaeCurve> curves;
    for (std::size_t i = 0; i < ctx.config.evaluate_models.size(); ++i) {
        auto pc = ctx.config.projection;
        pc.kind = ctx.config.evaluate_models[i];
        auto rep = kfold_evaluate(examples, pc, derive_seed(ctx.seeds.evaluation, i));
        curves.insert(curves.end(), rep.curves.begin(), rep.curves.end());
    }
    const auto lnc_pred = lnc_predictions(examples, table, ctx.config.lnc_par);
    for (int inn = 1; inn <= 2; ++inn) curves.push_back(mae_curve("lnc", inn, examples, lnc_pred));

    std::vector<MatchSummary> summaries;
    for (const auto& m : matches) summaries.push_back(m.summary);
    const auto camp_agree = mom_agreement(camp_reports, summaries, "camp");
    const auto lnc_agree = mom_agreement(lnc_reports, summaries, "lnc");

    const auto venues = export_venue_distributions(matches);

    st.write("mae.csv", mae_csv(curves));
    st.write("mae_summary.json", mae_summary_json(curves));
    st.write("agreement.json", dump(json{{"reports", {json(camp_agree), json(lnc_agree)}}}));
    st.write("comparison.csv", comparison_csv(compare_methods(camp_reports, lnc_reports, "camp", "lnc")));
    st.write("venue_scores.csv", venue_scores_csv(venues));
    st.write("venue_ks.csv", venue_ks_csv(venues));

    if (ctx.config.with_dataset) {
        const auto pre = json::parse(st.artifact(kIngestDir, "preprocess_report.json", "ingest"));
        const auto& w = camp_agree.winning11;
        json checks{
            {"matches_after_filtering", {{"observed", pre.at("output_matches")}, {"expected", 1110}}},
            {"innings1_after",
             {{"observed", pre.at("after").at(0)},
              {"expected", {{"min", 133}, {"max", 375}, {"mean", 256}, {"std", 50}}},
              {"tolerance_runs", 1}}},
            {"winning11_agreement",
             {{"observed", {{"rank1", w.fraction(w.rank1)}, {"top2", w.fraction(w.top2)}, {"top3", w.fraction(w.top3)}}},
              {"expected", {{"rank1", 0.663}, {"top2", 0.831}, {"top3", 0.902}}},
              {"tolerance", 0.03}}}};
        st.write("dataset_checks.json", dump(checks));
    }
    st.finish();
}

void cmd_pipeline(const Context& ctx) {
    const auto& c = ctx.config;
    const bool raw_given = c.with_dataset || !c.paths.balls.empty() || !c.paths.summaries.empty() ||
                           !c.paths.lineups.empty();
    if (!raw_given) cmd_simulate(ctx);
    cmd_ingest(ctx);
    cmd_features(ctx);
    cmd_cluster(ctx);
    cmd_project(ctx);
    cmd_rate(ctx);
    cmd_baseline(ctx);
    cmd_evaluate(ctx);
}

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> n{"ingest", "features", "cluster",  "project", "rate",
                                            "baseline", "evaluate", "simulate", "pipeline"};
    return n;
}

void run_command(std::string_view name, const Context& ctx) {
    if (name == "simulate") return cmd_simulate(ctx);
    if (name == "ingest") return cmd_ingest(ctx);
    if (name == "features") return cmd_features(ctx);
    if (name == "cluster") return cmd_cluster(ctx);
    if (name == "project") return cmd_project(ctx);
    if (name == "rate") return cmd_rate(ctx);
    if (name == "baseline") return cmd_baseline(ctx);
    if (name == "evaluate") return cmd_evaluate(ctx);
    if (name == "pipeline") return cmd_pipeline(ctx);
    throw ValidationError("unknown command '" + std::string(name) + "'");
}

}  // namespace camp::cli
