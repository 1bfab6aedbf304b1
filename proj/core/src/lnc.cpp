#include "camp/lnc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "camp/csv.hpp"

namespace camp {

namespace {

const std::vector<std::string> kHeader{"overs_left", "wickets_lost", "resource_pct"};

double lerp_between(int x0, double y0, int x1, double y1, int x) {
    return y0 + (y1 - y0) * static_cast<double>(x - x0) / static_cast<double>(x1 - x0);
}

}  // namespace

ResourceTable ResourceTable::from_anchors(std::span<const ResourceAnchor> anchors, std::string provenance) {
    ResourceTable t;
    t.provenance_ = std::move(provenance);
    for (const auto& a : anchors) {
        if (a.overs_left < 0 || a.overs_left > kMaxOversLeft || a.wickets_lost < 0 || a.wickets_lost > kMaxWickets) {
            throw ValidationError("resource table: anchor (" + std::to_string(a.overs_left) + "," +
                                  std::to_string(a.wickets_lost) + ") outside 0..50 x 0..9");
        }
        if (!std::isfinite(a.resource_pct)) throw ValidationError("resource table: non-finite value");
        auto& flag = t.anchor_[static_cast<std::size_t>(a.overs_left)][static_cast<std::size_t>(a.wickets_lost)];
        if (flag) {
            throw ValidationError("resource table: duplicate anchor (" + std::to_string(a.overs_left) + "," +
                                  std::to_string(a.wickets_lost) + ")");
        }
        flag = true;
        t.grid_[static_cast<std::size_t>(a.overs_left)][static_cast<std::size_t>(a.wickets_lost)] = a.resource_pct;
    }

    std::vector<int> rows;
    for (int o = 0; o <= kMaxOversLeft; ++o) {
        const auto& flags = t.anchor_[static_cast<std::size_t>(o)];
        std::vector<int> cols;
        for (int w = 0; w <= kMaxWickets; ++w)
            if (flags[static_cast<std::size_t>(w)]) cols.push_back(w);
        if (cols.empty()) continue;
        rows.push_back(o);
        auto& g = t.grid_[static_cast<std::size_t>(o)];
        for (int w = 0; w <= kMaxWickets; ++w) {
            if (flags[static_cast<std::size_t>(w)]) continue;
            if (w < cols.front()) {
                g[static_cast<std::size_t>(w)] = g[static_cast<std::size_t>(cols.front())];
            } else if (w > cols.back()) {
                g[static_cast<std::size_t>(w)] = g[static_cast<std::size_t>(cols.back())];
            } else {
                const auto hi = *std::upper_bound(cols.begin(), cols.end(), w);
                const auto lo = *(std::upper_bound(cols.begin(), cols.end(), w) - 1);
                g[static_cast<std::size_t>(w)] = lerp_between(lo, g[static_cast<std::size_t>(lo)], hi,
                                                              g[static_cast<std::size_t>(hi)], w);
            }
        }
    }
    if (rows.empty() || rows.front() != 0 || rows.back() != kMaxOversLeft) {
        throw ValidationError("resource table: rows overs_left=0 and overs_left=50 must be provided");
    }
    for (std::size_t r = 0; r + 1 < rows.size(); ++r) {
        const int lo = rows[r];
        const int hi = rows[r + 1];
        for (int o = lo + 1; o < hi; ++o)
            for (std::size_t w = 0; w <= kMaxWickets; ++w) {
                t.grid_[static_cast<std::size_t>(o)][w] =
                    lerp_between(lo, t.grid_[static_cast<std::size_t>(lo)][w], hi,
                                 t.grid_[static_cast<std::size_t>(hi)][w], o);
            }
    }

    for (std::size_t o = 0; o <= kMaxOversLeft; ++o)
        for (std::size_t w = 0; w <= kMaxWickets; ++w) {
            const double v = t.grid_[o][w];
            const std::string at = "(" + std::to_string(o) + "," + std::to_string(w) + ")";
            if (v < 0.0 || v > 100.0) throw ValidationError("resource table: value at " + at + " outside [0,100]");
            if (w > 0 && v > t.grid_[o][w - 1]) {
                throw ValidationError("resource table: increases with wickets lost at " + at);
            }
            if (o > 0 && v < t.grid_[o - 1][w]) {
                throw ValidationError("resource table: decreases with overs left at " + at);
            }
        }
    if (t.grid_[kMaxOversLeft][0] != 100.0) throw ValidationError("resource table: (50,0) must be 100");
    return t;
}

std::vector<ResourceAnchor> ResourceTable::standard_anchors() {
    static constexpr int overs[] = {50, 40, 30, 20, 10};
    static constexpr int wkts[] = {0, 2, 4, 9};
    static constexpr double pct[5][4] = {{100.0, 83.8, 62.4, 7.6},
                                         {90.3, 77.6, 59.8, 7.6},
                                         {77.1, 68.2, 54.9, 7.6},
                                         {58.9, 54.0, 46.1, 7.6},
                                         {34.1, 32.5, 29.8, 7.6}};
    std::vector<ResourceAnchor> out;
    for (int w = 0; w <= kMaxWickets; ++w) out.push_back({0, w, 0.0});
    for (std::size_t r = 0; r < 5; ++r)
        for (std::size_t c = 0; c < 4; ++c) out.push_back({overs[r], wkts[c], pct[r][c]});
    return out;
}

const ResourceTable& ResourceTable::standard() {
    static const ResourceTable t = from_anchors(
        standard_anchors(),
        "Duckworth-Lewis excerpt: overs_left {50,40,30,20,10} x wickets_lost {0,2,4,9}, row 0 = 0; "
        "wickets 1,3,5-8 interpolated linearly per row, intermediate overs linearly per column");
    return t;
}

double ResourceTable::resource(int overs_left, int wickets_lost) const {
    if (overs_left < 0 || overs_left > kMaxOversLeft || wickets_lost < 0 || wickets_lost > kMaxWickets + 1) {
        throw ValidationError("resource table: (" + std::to_string(overs_left) + "," + std::to_string(wickets_lost) +
                              ") outside the grid");
    }
    if (wickets_lost == kMaxWickets + 1) return 0.0;
    return grid_[static_cast<std::size_t>(overs_left)][static_cast<std::size_t>(wickets_lost)];
}

bool ResourceTable::is_anchor(int overs_left, int wickets_lost) const {
    if (overs_left < 0 || overs_left > kMaxOversLeft || wickets_lost < 0 || wickets_lost > kMaxWickets) return false;
    return anchor_[static_cast<std::size_t>(overs_left)][static_cast<std::size_t>(wickets_lost)];
}

std::vector<ResourceAnchor> parse_resource_anchors(std::istream& in, const std::string& source) {
    std::vector<ResourceAnchor> out;
    for (const auto& row : csv::read(in, source, kHeader)) {
        try {
            out.push_back({static_cast<int>(parse_int(row.fields[0], "overs_left")),
                           static_cast<int>(parse_int(row.fields[1], "wickets_lost")),
                           parse_double(row.fields[2], "resource_pct")});
        } catch (const ValidationError& e) {
            throw ParseError(source, row.line, e.what());
        }
    }
    return out;
}

ResourceTable load_resource_table(const std::filesystem::path& path) {
    std::istringstream in(csv::read_file(path));
    const auto anchors = parse_resource_anchors(in, path.string());
    return ResourceTable::from_anchors(anchors, "loaded from " + path.filename().string());
}

std::string resource_anchors_csv(std::span<const ResourceAnchor> anchors) {
    std::string out = csv::join(kHeader) + "\n";
    for (const auto& a : anchors) {
        out += csv::join({std::to_string(a.overs_left), std::to_string(a.wickets_lost), format_double(a.resource_pct)});
        out += "\n";
    }
    return out;
}

std::string resource_table_csv(const ResourceTable& table) {
    std::vector<ResourceAnchor> all;
    for (int o = ResourceTable::kMaxOversLeft; o >= 0; --o)
        for (int w = 0; w <= ResourceTable::kMaxWickets; ++w) all.push_back({o, w, table.resource(o, w)});
    return resource_anchors_csv(all);
}

double lnc_project(int overs_left, int wickets_lost, const ResourceTable& table, int innings, int target,
                   double first_innings_par) {
    if (innings != 1 && innings != 2) throw ValidationError("lnc_project: innings must be 1 or 2");
    const double z = innings == 1 ? first_innings_par : static_cast<double>(target);
    return z * table.resource(overs_left, wickets_lost) / 100.0;
}

std::vector<double> lnc_trace(const Match& match, int innings, const ResourceTable& table, double first_innings_par) {
    const auto& overs = match.innings_overs(innings);
    if (overs.empty()) throw ValidationError("lnc_trace: " + match.id() + " innings has no overs");
    const int target = innings == 2 ? match.summary.target_runs() : 0;
    std::vector<double> r;
    r.reserve(overs.size() + 1);
    int wickets = 0;
    for (std::size_t i = 0; i < overs.size(); ++i) {
        r.push_back(lnc_project(kOversPerInnings - static_cast<int>(i), wickets, table, innings, target,
                                first_innings_par));
        wickets += overs[i].wicket_count();
    }
    r.push_back(0.0);
    return r;
}

std::vector<double> lnc_predictions(std::span<const TrainingExample> examples, const ResourceTable& table,
                                    double first_innings_par) {
    std::vector<double> out;
    out.reserve(examples.size());
    for (const auto& e : examples)
        out.push_back(lnc_project(e.overs_remaining, e.wickets_lost, table, e.innings, e.target, first_innings_par));
    return out;
}

RatingReport lnc_rate_match(const Match& match, const ResourceTable& table, const ScoringParams& params,
                            double first_innings_par) {
    const auto r1 = lnc_trace(match, 1, table, first_innings_par);
    const auto r2 = lnc_trace(match, 2, table, first_innings_par);
    return rate_match(match, r1, r2, params, "lnc");
}

}  // namespace camp
