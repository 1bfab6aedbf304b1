#include "config.hpp"

#include <set>
#include <sstream>

#include "camp/csv.hpp"

namespace camp::cli {

namespace {

using nlohmann::json;

class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) fail(path_, "expected an object");
    }

    ~Reader() noexcept(false) {
        if (std::uncaught_exceptions() > 0) return;
        for (const auto& [k, v] : j_.items())
            if (!seen_.count(k)) fail(key(k), "unknown key");
    }

    Reader(const Reader&) = delete;
    Reader& operator=(const Reader&) = delete;

    template <class T>
    void get(const std::string& k, T& out) {
        seen_.insert(k);
        auto it = j_.find(k);
        if (it == j_.end()) return;
        read(*it, key(k), out);
    }

    Reader child(const std::string& k) {
        seen_.insert(k);
        static const json empty = json::object();
        auto it = j_.find(k);
        return Reader(it == j_.end() ? empty : *it, key(k));
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;

    std::string key(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }

    [[noreturn]] static void fail(const std::string& where, const std::string& what) {
        throw ValidationError("config: " + (where.empty() ? std::string("<root>") : where) + ": " + what);
    }

    static void read(const json& v, const std::string& where, double& out) {
        if (!v.is_number()) fail(where, "expected a number");
        out = v.get<double>();
    }
    static void read(const json& v, const std::string& where, int& out) {
        if (!v.is_number_integer()) fail(where, "expected an integer");
        out = v.get<int>();
    }
    static void read(const json& v, const std::string& where, std::uint64_t& out) {
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
            fail(where, "expected a non-negative integer");
        }
        out = v.get<std::uint64_t>();
    }
    static void read(const json& v, const std::string& where, bool& out) {
        if (!v.is_boolean()) fail(where, "expected true or false");
        out = v.get<bool>();
    }
    static void read(const json& v, const std::string& where, std::string& out) {
        if (!v.is_string()) fail(where, "expected a string");
        out = v.get<std::string>();
    }
    static void read(const json& v, const std::string& where, std::vector<std::string>& out) {
        if (!v.is_array()) fail(where, "expected an array of strings");
        out.clear();
        for (const auto& e : v) {
            if (!e.is_string()) fail(where, "expected an array of strings");
            out.push_back(e.get<std::string>());
        }
    }
    static void read(const json& v, const std::string& where, std::vector<double>& out) {
        if (!v.is_array()) fail(where, "expected an array of numbers");
        out.clear();
        for (const auto& e : v) {
            if (!e.is_number()) fail(where, "expected an array of numbers");
            out.push_back(e.get<double>());
        }
    }
    static void read(const json& v, const std::string& where, std::optional<std::size_t>& out) {
        if (v.is_null()) {
            out.reset();
            return;
        }
        if (!v.is_number_integer() || v.get<long long>() <= 0) fail(where, "expected null or a positive integer");
        out = v.get<std::size_t>();
    }
    template <std::size_t N>
    static void read(const json& v, const std::string& where, std::array<double, N>& out) {
        std::vector<double> tmp;
        read(v, where, tmp);
        if (tmp.size() != N) fail(where, "expected " + std::to_string(N) + " numbers");
        std::copy(tmp.begin(), tmp.end(), out.begin());
    }
};

void check(bool ok, const std::string& where, const std::string& what) {
    if (!ok) throw ValidationError("config: " + where + ": " + what);
}

std::string weighting_name(KnnWeighting w) { return w == KnnWeighting::Softmax ? "softmax" : "inverse_distance"; }

}  // namespace

RunConfig parse_config(const json& j) {
    RunConfig c;
    Reader root(j, "");
    root.get("seed", c.seed);
    {
        auto p = root.child("paths");
        p.get("balls", c.paths.balls);
        p.get("summaries", c.paths.summaries);
        p.get("lineups", c.paths.lineups);
        p.get("venue_map", c.paths.venue_map);
        p.get("resource_table", c.paths.resource_table);
        p.get("out", c.paths.out);
    }
    {
        auto p = root.child("preprocess");
        p.get("excluded_teams", c.preprocess.excluded_teams);
        p.get("sigma_band", c.preprocess.sigma_band);
    }
    {
        auto f = root.child("features");
        f.get("batting_runs", c.features.batting_runs.lower);
        f.get("batting_strike_rate", c.features.batting_strike_rate.lower);
        f.get("bowling_average", c.features.bowling_average.lower);
        f.get("bowling_strike_rate", c.features.bowling_strike_rate.lower);
        f.get("bowling_economy", c.features.bowling_economy.lower);
    }
    {
        auto k = root.child("clustering");
        k.get("team_k", c.clustering.team_k);
        k.get("batter_k", c.clustering.batter_k);
        k.get("bowler_k", c.clustering.bowler_k);
        k.get("max_iters", c.clustering.max_iters);
        k.get("tol", c.clustering.tol);
        k.get("standardize", c.clustering.standardize);
    }
    {
        auto p = root.child("projection");
        std::string model(to_string(c.projection.kind));
        p.get("model", model);
        try {
            c.projection.kind = parse_model_kind(model);
        } catch (const ValidationError& e) {
            throw ValidationError(std::string("config: projection.model: ") + e.what());
        }
        p.get("lambda", c.projection.lambda);
        p.get("k_folds", c.projection.k_folds);
        std::vector<std::string> models;
        for (auto m : c.evaluate_models) models.emplace_back(to_string(m));
        p.get("evaluate_models", models);
        c.evaluate_models.clear();
        for (const auto& m : models) {
            try {
                c.evaluate_models.push_back(parse_model_kind(m));
            } catch (const ValidationError& e) {
                throw ValidationError(std::string("config: projection.evaluate_models: ") + e.what());
            }
        }
        {
            auto k = p.child("knn");
            k.get("epsilon", c.projection.knn.epsilon);
            k.get("max_neighbors", c.projection.knn.max_neighbors);
            std::string w = weighting_name(c.projection.knn.weighting);
            k.get("weighting", w);
            check(w == "inverse_distance" || w == "softmax", "projection.knn.weighting",
                  "expected inverse_distance or softmax");
            c.projection.knn.weighting = w == "softmax" ? KnnWeighting::Softmax : KnnWeighting::InverseDistance;
            k.get("softmax_temperature", c.projection.knn.softmax_temperature);
            k.get("leave_one_out", c.projection.knn.leave_one_out);
        }
        {
            auto f = p.child("forest");
            f.get("n_trees", c.projection.forest.n_trees);
            f.get("max_depth", c.projection.forest.max_depth);
            f.get("min_leaf", c.projection.forest.min_leaf);
            f.get("feature_frac", c.projection.forest.feature_frac);
        }
    }
    {
        auto s = root.child("scoring");
        s.get("w", c.scoring.w);
        s.get("w_bat", c.scoring.w_bat);
        s.get("w_bowl", c.scoring.w_bowl);
        s.get("byes_against_bowler", c.scoring.byes_against_bowler);
        s.get("scale_final_partial_over", c.scoring.scale_final_partial_over);
    }
    {
        auto l = root.child("lnc");
        l.get("first_innings_par", c.lnc_par);
    }
    {
        auto g = root.child("simulate");
        g.get("n_matches", c.simulate.n_matches);
        g.get("asia_fraction", c.simulate.asia_fraction);
        g.get("asia_run_factor", c.simulate.asia_run_factor);
        g.get("phase_factor", c.simulate.phase_factor);
        g.get("skill_spread", c.simulate.skill_spread);
        g.get("archetypes", c.simulate.archetypes);
        g.get("wide_prob", c.simulate.wide_prob);
        g.get("no_ball_prob", c.simulate.no_ball_prob);
        g.get("bye_prob", c.simulate.bye_prob);
        g.get("leg_bye_prob", c.simulate.leg_bye_prob);
        g.get("run_out_share", c.simulate.run_out_share);
        std::array<double, 3> rpo{};
        std::array<double, 3> haz{};
        for (std::size_t t = 0; t < 3; ++t) {
            rpo[t] = c.simulate.tiers[t].runs_per_over;
            haz[t] = c.simulate.tiers[t].wicket_hazard;
        }
        g.get("tier_runs_per_over", rpo);
        g.get("tier_wicket_hazard", haz);
        for (std::size_t t = 0; t < 3; ++t) {
            c.simulate.tiers[t].runs_per_over = rpo[t];
            c.simulate.tiers[t].wicket_hazard = haz[t];
        }
    }
    {
        std::string ds;
        root.get("with_dataset", ds);
        if (!ds.empty()) c.with_dataset = ds;
    }
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    const auto text = csv::read_file(path);
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError("config " + path.string() + ": " + e.what());
    }
    return parse_config(j);
}

void RunConfig::validate() const {
    check(preprocess.sigma_band > 0.0, "preprocess.sigma_band", "must be > 0");
    try {
        features.validate();
    } catch (const ValidationError& e) {
        throw ValidationError(std::string("config: features: ") + e.what());
    }
    check(clustering.team_k == kTeamClusterCount, "clustering.team_k",
          "must be " + std::to_string(kTeamClusterCount) + " (the batter and bowler dimensions depend on it)");
    check(clustering.batter_k >= 1, "clustering.batter_k", "must be >= 1");
    check(clustering.bowler_k >= 1, "clustering.bowler_k", "must be >= 1");
    check(clustering.max_iters >= 1, "clustering.max_iters", "must be >= 1");
    check(clustering.tol > 0.0, "clustering.tol", "must be > 0");
    check(projection.lambda >= 0.0, "projection.lambda", "must be >= 0");
    check(projection.k_folds >= 2, "projection.k_folds", "must be >= 2");
    check(!evaluate_models.empty(), "projection.evaluate_models", "must not be empty");
    check(projection.knn.epsilon > 0.0, "projection.knn.epsilon", "must be > 0");
    check(projection.knn.softmax_temperature > 0.0, "projection.knn.softmax_temperature", "must be > 0");
    check(projection.forest.n_trees >= 1, "projection.forest.n_trees", "must be >= 1");
    check(projection.forest.max_depth >= 0, "projection.forest.max_depth", "must be >= 0");
    check(projection.forest.min_leaf >= 1, "projection.forest.min_leaf", "must be >= 1");
    check(projection.forest.feature_frac > 0.0 && projection.forest.feature_frac <= 1.0,
          "projection.forest.feature_frac", "must be in (0, 1]");
    check(scoring.w >= 0.1 && scoring.w <= 1.0, "scoring.w", "must be in [0.1, 1]");
    check(scoring.w_bat >= 0.0, "scoring.w_bat", "must be >= 0");
    check(scoring.w_bowl >= 0.0, "scoring.w_bowl", "must be >= 0");
    check(lnc_par > 0.0, "lnc.first_innings_par", "must be > 0");
    try {
        simulate.validate();
    } catch (const ValidationError& e) {
        throw ValidationError(std::string("config: simulate: ") + e.what());
    }
    check(simulate.overs_per_innings == kOversPerInnings, "simulate", "innings must be 50 overs");
}

json canonical_json(const RunConfig& c) {
    json models = json::array();
    for (auto m : c.evaluate_models) models.push_back(std::string(to_string(m)));
    json rpo = json::array();
    json haz = json::array();
    for (const auto& t : c.simulate.tiers) {
        rpo.push_back(t.runs_per_over);
        haz.push_back(t.wicket_hazard);
    }
    return json{
        {"seed", c.seed},
        {"paths",
         {{"balls", c.paths.balls},
          {"summaries", c.paths.summaries},
          {"lineups", c.paths.lineups},
          {"venue_map", c.paths.venue_map},
          {"resource_table", c.paths.resource_table}}},
        {"preprocess", {{"excluded_teams", c.preprocess.excluded_teams}, {"sigma_band", c.preprocess.sigma_band}}},
        {"features",
         {{"batting_runs", c.features.batting_runs.lower},
          {"batting_strike_rate", c.features.batting_strike_rate.lower},
          {"bowling_average", c.features.bowling_average.lower},
          {"bowling_strike_rate", c.features.bowling_strike_rate.lower},
          {"bowling_economy", c.features.bowling_economy.lower}}},
        {"clustering",
         {{"team_k", c.clustering.team_k},
          {"batter_k", c.clustering.batter_k},
          {"bowler_k", c.clustering.bowler_k},
          {"max_iters", c.clustering.max_iters},
          {"tol", c.clustering.tol},
          {"standardize", c.clustering.standardize}}},
        {"projection",
         {{"model", std::string(to_string(c.projection.kind))},
          {"lambda", c.projection.lambda},
          {"k_folds", c.projection.k_folds},
          {"evaluate_models", models},
          {"knn",
           {{"epsilon", c.projection.knn.epsilon},
            {"max_neighbors", c.projection.knn.max_neighbors ? json(*c.projection.knn.max_neighbors) : json(nullptr)},
            {"weighting", weighting_name(c.projection.knn.weighting)},
            {"softmax_temperature", c.projection.knn.softmax_temperature},
            {"leave_one_out", c.projection.knn.leave_one_out}}},
          {"forest",
           {{"n_trees", c.projection.forest.n_trees},
            {"max_depth", c.projection.forest.max_depth},
            {"min_leaf", c.projection.forest.min_leaf},
            {"feature_frac", c.projection.forest.feature_frac}}}}},
        {"scoring",
         {{"w", c.scoring.w},
          {"w_bat", c.scoring.w_bat},
          {"w_bowl", c.scoring.w_bowl},
          {"byes_against_bowler", c.scoring.byes_against_bowler},
          {"scale_final_partial_over", c.scoring.scale_final_partial_over}}},
        {"lnc", {{"first_innings_par", c.lnc_par}}},
        {"simulate",
         {{"n_matches", c.simulate.n_matches},
          {"asia_fraction", c.simulate.asia_fraction},
          {"asia_run_factor", c.simulate.asia_run_factor},
          {"phase_factor", c.simulate.phase_factor},
          {"skill_spread", c.simulate.skill_spread},
          {"archetypes", c.simulate.archetypes},
          {"wide_prob", c.simulate.wide_prob},
          {"no_ball_prob", c.simulate.no_ball_prob},
          {"bye_prob", c.simulate.bye_prob},
          {"leg_bye_prob", c.simulate.leg_bye_prob},
          {"run_out_share", c.simulate.run_out_share},
          {"tier_runs_per_over", rpo},
          {"tier_wicket_hazard", haz}}},
        {"with_dataset", c.with_dataset.value_or("")},
    };
}

std::string config_hash(const RunConfig& c) { return hex64(fnv1a64(canonical_json(c).dump())); }

Seeds derive_seeds(std::uint64_t root) {
    return Seeds{root, root, derive_seed(root, 1), derive_seed(root, 2), derive_seed(root, 3)};
}

}  // namespace camp::cli
