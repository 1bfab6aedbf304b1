#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

struct Overrides {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> model;
    std::optional<double> w;
    std::optional<double> w_bat;
    std::optional<double> w_bowl;
    std::optional<std::string> with_dataset;
    std::optional<std::string> out;
};

camp::cli::RunConfig resolve(const Overrides& o) {
    auto c = o.config_path.empty() ? camp::cli::RunConfig{} : camp::cli::load_config(o.config_path);
    if (o.seed) c.seed = *o.seed;
    if (o.model) c.projection.kind = camp::parse_model_kind(*o.model);
    if (o.w) c.scoring.w = *o.w;
    if (o.w_bat) c.scoring.w_bat = *o.w_bat;
    if (o.w_bowl) c.scoring.w_bowl = *o.w_bowl;
    if (o.with_dataset) c.with_dataset = *o.with_dataset;
    if (o.out) c.paths.out = *o.out;
    c.validate();
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CAMP: context-aware player ratings for ODI cricket"};
    app.require_subcommand(1, 1);
    Overrides o;
    app.add_option("--config", o.config_path, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--seed", o.seed, "root seed");
    app.add_option("--model", o.model, "projection model")
        ->check(CLI::IsMember({"knn", "ridge", "forest"}));
    app.add_option("--w", o.w, "wicket weight in [0.1, 1]");
    app.add_option("--w-bat", o.w_bat, "batting weight");
    app.add_option("--w-bowl", o.w_bowl, "bowling weight");
    app.add_option("--with-dataset", o.with_dataset, "directory with balls.csv, matches.csv, lineups.csv");
    app.add_option("--out", o.out, "output directory");

    const std::map<std::string, std::string> help{
        {"simulate", "write a synthetic league to <out>/data"},
        {"ingest", "validate, assemble and filter raw ball-by-ball data"},
        {"features", "team, batter and bowler feature vectors"},
        {"cluster", "k-means clusters for teams, batters and bowlers"},
        {"project", "training examples, projection models and out-of-sample traces"},
        {"rate", "per-match and series CAMP ratings"},
        {"baseline", "LNC ratings from the resource table"},
        {"evaluate", "MoM agreement, MAE curves, method comparison, venue distributions"},
        {"pipeline", "simulate (without raw inputs), then ingest through evaluate"},
    };
    for (const auto& name : camp::cli::command_names()) app.add_subcommand(name, help.at(name));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const camp::cli::Context ctx(resolve(o));
        camp::cli::run_command(app.get_subcommands().front()->get_name(), ctx);
    } catch (const camp::IoError& e) {
        std::cerr << "camp: " << e.what() << "\n";
        return 3;
    } catch (const camp::ValidationError& e) {
        std::cerr << "camp: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "camp: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
