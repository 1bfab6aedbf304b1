#include "camp/evaluation.hpp"

#include <algorithm>
#include <map>

#include <nlohmann/json.hpp>

#include "camp/csv.hpp"

namespace camp {

AgreementReport mom_agreement(std::span<const RatingReport> reports, std::span<const MatchSummary> summaries,
                              std::string method) {
    std::map<MatchId, const MatchSummary*> by;
    for (const auto& s : summaries) by[s.match_id] = &s;

    AgreementReport out;
    out.method = std::move(method);
    auto tally = [](AgreementCounts& c, std::optional<int> rank) {
        c.n += 1;
        if (!rank) return;
        if (*rank <= 1) c.rank1 += 1;
        if (*rank <= 2) c.top2 += 1;
        if (*rank <= 3) c.top3 += 1;
    };
    for (const auto& rep : reports) {
        auto it = by.find(rep.match_id);
        if (it == by.end()) throw ValidationError("mom_agreement: no summary for match " + rep.match_id);
        const auto& mom = it->second->mom_player_id;
        auto row = std::find_if(rep.rows.begin(), rep.rows.end(), [&](const auto& r) { return r.player == mom; });
        if (row == rep.rows.end()) {
            throw ValidationError("mom_agreement: MoM " + mom + " of " + rep.match_id + " is not in the lineups");
        }
        out.n_matches += 1;
        tally(out.winning11, row->rank_winning11);
        tally(out.all22, row->rank_all22);
    }
    return out;
}

void to_json(nlohmann::json& j, const AgreementReport& r) {
    auto pool = [](const AgreementCounts& c) {
        return nlohmann::json{{"n", c.n},
                              {"rank1", c.rank1},
                              {"top2", c.top2},
                              {"top3", c.top3},
                              {"rank1_fraction", c.fraction(c.rank1)},
                              {"top2_fraction", c.fraction(c.top2)},
                              {"top3_fraction", c.fraction(c.top3)}};
    };
    j = nlohmann::json{
        {"method", r.method}, {"n_matches", r.n_matches}, {"winning11", pool(r.winning11)}, {"all22", pool(r.all22)}};
}

MethodComparison compare_methods(std::span<const RatingReport> a, std::span<const RatingReport> b,
                                 std::string method_a, std::string method_b) {
    if (a.size() != b.size()) throw ValidationError("compare_methods: report sets differ in size");
    std::map<MatchId, const RatingReport*> bmap;
    for (const auto& r : b) bmap[r.match_id] = &r;
    MethodComparison c{std::move(method_a), std::move(method_b), {}};
    for (const auto& ra : a) {
        auto it = bmap.find(ra.match_id);
        if (it == bmap.end()) throw ValidationError("compare_methods: match " + ra.match_id + " missing from second set");
        const auto& rb = *it->second;
        if (ra.rows.size() != rb.rows.size()) {
            throw ValidationError("compare_methods: player sets differ for " + ra.match_id);
        }
        for (const auto& pa : ra.rows) {
            const auto& pb = rb.row(pa.player);
            c.rows.push_back({ra.match_id, pa.player, pa.team, pa.camp_score, pb.camp_score, pa.rank_all22,
                              pb.rank_all22, pa.rank_winning11, pb.rank_winning11});
        }
    }
    return c;
}

std::string comparison_csv(const MethodComparison& c) {
    const auto& a = c.method_a;
    const auto& b = c.method_b;
    std::string out = csv::join({"match_id", "player", "team", a + "_score", b + "_score", a + "_rank_all22",
                                 b + "_rank_all22", a + "_rank_winning11", b + "_rank_winning11", "score_delta",
                                 "rank_all22_delta"}) +
                      "\n";
    auto opt = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); };
    for (const auto& r : c.rows) {
        out += csv::join({r.match_id, r.player, r.team, format_double(r.score_a), format_double(r.score_b),
                          std::to_string(r.rank_all22_a), std::to_string(r.rank_all22_b), opt(r.rank_winning11_a),
                          opt(r.rank_winning11_b), format_double(r.score_a - r.score_b),
                          std::to_string(r.rank_all22_a - r.rank_all22_b)});
        out += "\n";
    }
    return out;
}

std::string mae_summary_json(std::span<const MaeCurve> curves) {
    auto arr = nlohmann::json::array();
    for (const auto& c : curves) {
        double sum = 0.0;
        std::size_t overs = 0;
        std::size_t n = 0;
        for (std::size_t o = 0; o < c.mae.size(); ++o) {
            n += c.n[o];
            if (!c.mae[o]) continue;
            sum += *c.mae[o];
            ++overs;
        }
        nlohmann::json e{{"model", c.model}, {"innings", c.innings}, {"n", n}, {"overs_with_data", overs}};
        e["mean_mae"] = overs == 0 ? nlohmann::json(nullptr) : nlohmann::json(sum / static_cast<double>(overs));
        arr.push_back(std::move(e));
    }
    return arr.dump(2) + "\n";
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw ValidationError("ks_statistic: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    while (i < a.size() || j < b.size()) {
        const double x = j == b.size() || (i < a.size() && a[i] <= b[j]) ? a[i] : b[j];
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

VenueDistributions export_venue_distributions(std::span<const Match> matches) {
    VenueDistributions out;
    std::map<std::pair<int, int>, std::vector<std::pair<int, MatchId>>> groups;
    for (const auto& m : matches)
        for (int inn = 1; inn <= 2; ++inn) {
            groups[{inn, static_cast<int>(m.summary.venue_class)}].push_back(
                {m.summary.innings_totals[static_cast<std::size_t>(inn - 1)].runs, m.id()});
        }
    for (auto& [key, g] : groups) {
        std::sort(g.begin(), g.end());
        for (std::size_t i = 0; i < g.size(); ++i) {
            std::size_t le = i + 1;
            while (le < g.size() && g[le].first == g[i].first) ++le;
            out.scores.push_back({key.first, static_cast<VenueClass>(key.second), g[i].second, g[i].first,
                                  static_cast<double>(le) / static_cast<double>(g.size())});
        }
    }
    for (int inn = 1; inn <= 2; ++inn) {
        KsResult k;
        k.innings = inn;
        std::vector<double> a;
        std::vector<double> b;
        for (const auto& [total, id] : groups[{inn, 0}]) a.push_back(total);
        for (const auto& [total, id] : groups[{inn, 1}]) b.push_back(total);
        k.n_asia = a.size();
        k.n_non_asia = b.size();
        if (!a.empty() && !b.empty()) k.statistic = ks_statistic(a, b);
        out.ks.push_back(k);
    }
    return out;
}

std::string venue_scores_csv(const VenueDistributions& d) {
    std::string out = "innings,venue_class,match_id,total,ecdf\n";
    for (const auto& s : d.scores) {
        out += csv::join({std::to_string(s.innings), std::string(to_string(s.venue)), s.match_id,
                          std::to_string(s.total), format_double(s.ecdf)});
        out += "\n";
    }
    return out;
}

std::string venue_ks_csv(const VenueDistributions& d) {
    std::string out = "innings,n_asia,n_nonasia,ks_statistic\n";
    for (const auto& k : d.ks) {
        out += csv::join({std::to_string(k.innings), std::to_string(k.n_asia), std::to_string(k.n_non_asia),
                          k.statistic ? format_double(*k.statistic) : std::string()});
        out += "\n";
    }
    return out;
}

}  // namespace camp
