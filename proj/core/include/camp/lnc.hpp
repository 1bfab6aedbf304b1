#pragma once

#include <array>
#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <vector>

#include "camp/ingest.hpp"
#include "camp/scoring.hpp"

namespace camp {

inline constexpr double kLncFirstInningsPar = 235.0;

struct ResourceAnchor {
    int overs_left = 0;
    int wickets_lost = 0;
    double resource_pct = 0.0;
};

/// Duckworth-Lewis resource percentages over overs_left 0..50 x wickets_lost 0..9.
class ResourceTable {
public:
    static constexpr int kMaxOversLeft = kOversPerInnings;
    static constexpr int kMaxWickets = 9;

    /// Completes a sparse grid: each anchored overs row is filled across the
    /// wicket axis by linear interpolation (held flat beyond its outermost
    /// anchors), then every wicket column is interpolated linearly between
    /// anchored rows. Rows 0 and 50 must be anchored. Throws ValidationError on
    /// out-of-range or duplicate anchors and when the filled grid breaks
    /// monotonicity, leaves [0, 100], or has (50, 0) != 100.
    static ResourceTable from_anchors(std::span<const ResourceAnchor> anchors, std::string provenance = {});

    /// The published excerpt: overs {50,40,30,20,10} x wickets {0,2,4,9} plus row 0 at zero.
    static const ResourceTable& standard();
    [[nodiscard]] static std::vector<ResourceAnchor> standard_anchors();

    /// Resource percentage; 10 wickets lost means no resource left.
    [[nodiscard]] double resource(int overs_left, int wickets_lost) const;
    [[nodiscard]] bool is_anchor(int overs_left, int wickets_lost) const;
    [[nodiscard]] const std::string& provenance() const noexcept { return provenance_; }

private:
    std::array<std::array<double, kMaxWickets + 1>, kMaxOversLeft + 1> grid_{};
    std::array<std::array<bool, kMaxWickets + 1>, kMaxOversLeft + 1> anchor_{};
    std::string provenance_;
};

[[nodiscard]] std::vector<ResourceAnchor> parse_resource_anchors(std::istream& in, const std::string& source);
[[nodiscard]] ResourceTable load_resource_table(const std::filesystem::path& path);
/// Full filled grid in the same overs_left,wickets_lost,resource_pct format.
[[nodiscard]] std::string resource_table_csv(const ResourceTable& table);
[[nodiscard]] std::string resource_anchors_csv(std::span<const ResourceAnchor> anchors);

/// Z * resource / 100 with Z = `first_innings_par` in innings 1 and `target` in innings 2.
[[nodiscard]] double lnc_project(int overs_left, int wickets_lost, const ResourceTable& table, int innings,
                                 int target, double first_innings_par = kLncFirstInningsPar);

/// R_LNC at boundaries 1..n+1 of one innings; the terminal boundary is 0.
[[nodiscard]] std::vector<double> lnc_trace(const Match& match, int innings, const ResourceTable& table,
                                            double first_innings_par = kLncFirstInningsPar);

/// LNC projection for each example, aligned with the input.
[[nodiscard]] std::vector<double> lnc_predictions(std::span<const TrainingExample> examples,
                                                  const ResourceTable& table,
                                                  double first_innings_par = kLncFirstInningsPar);

[[nodiscard]] RatingReport lnc_rate_match(const Match& match, const ResourceTable& table,
                                          const ScoringParams& params,
                                          double first_innings_par = kLncFirstInningsPar);

}  // namespace camp
