#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "config.hpp"

namespace camp::cli {

/// Resolved run: config plus the derived seeds and hash recorded in every manifest.
struct Context {
    RunConfig config;
    Seeds seeds;
    std::string config_hash;
    std::filesystem::path out;

    explicit Context(RunConfig c);
};

void cmd_simulate(const Context& ctx);
void cmd_ingest(const Context& ctx);
void cmd_features(const Context& ctx);
void cmd_cluster(const Context& ctx);
void cmd_project(const Context& ctx);
void cmd_rate(const Context& ctx);
void cmd_baseline(const Context& ctx);
void cmd_evaluate(const Context& ctx);
/// simulate (when no raw inputs are configured), then ingest through evaluate.
void cmd_pipeline(const Context& ctx);

[[nodiscard]] const std::vector<std::string>& command_names();
/// Dispatches by name; throws ValidationError for an unknown command.
void run_command(std::string_view name, const Context& ctx);

}  // namespace camp::cli
