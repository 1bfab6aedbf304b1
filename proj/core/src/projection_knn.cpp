#include <algorithm>
#include <cmath>
#include <numeric>

#include "camp/projection.hpp"

namespace camp {

std::string_view to_string(Relaxation r) noexcept {
    switch (r) {
        case Relaxation::Exact: return "exact";
        case Relaxation::OversPlusMinusOne: return "overs_pm1";
        case Relaxation::WicketsPlusMinusOne: return "wickets_pm1";
        case Relaxation::Global: return "global";
    }
    return "exact";
}

KnnStore::KnnStore(std::vector<TrainingExample> examples) : examples_(std::move(examples)) {
    if (examples_.empty()) throw ValidationError("KnnStore: no training examples");
    innings_ = examples_.front().innings;
    std::vector<std::vector<double>> rows;
    rows.reserve(examples_.size());
    for (const auto& e : examples_) {
        if (e.innings != innings_) throw ValidationError("KnnStore: examples mix innings");
        rows.push_back(e.x);
    }
    scaler_ = Standardizer::fit(rows);
    z_.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        z_.push_back(scaler_.apply(rows[i]));
        buckets_[{examples_[i].overs_remaining, examples_[i].wickets_lost}].push_back(i);
    }
}

void KnnStore::gather(int overs, int wickets, const MatchId* exclude, std::vector<std::size_t>& out) const {
    auto it = buckets_.find({overs, wickets});
    if (it == buckets_.end()) return;
    for (auto i : it->second) {
        if (exclude != nullptr && examples_[i].match_id == *exclude) continue;
        out.push_back(i);
    }
}

KnnPrediction KnnStore::predict(std::span<const double> x, int overs_remaining, int wickets_lost,
                                const MatchId* exclude_match, const KnnParams& params) const {
    if (examples_.empty()) throw ValidationError("KnnStore: empty store");
    const MatchId* exclude = params.leave_one_out ? exclude_match : nullptr;

    KnnPrediction out;
    std::vector<std::size_t> cand;
    gather(overs_remaining, wickets_lost, exclude, cand);
    if (cand.empty()) {
        out.relaxation = Relaxation::OversPlusMinusOne;
        for (int d : {-1, 1}) gather(overs_remaining + d, wickets_lost, exclude, cand);
    }
    if (cand.empty()) {
        out.relaxation = Relaxation::WicketsPlusMinusOne;
        for (int dov = -1; dov <= 1; ++dov)
            for (int dw : {-1, 1}) gather(overs_remaining + dov, wickets_lost + dw, exclude, cand);
    }
    if (cand.empty()) {
        out.relaxation = Relaxation::Global;
        for (std::size_t i = 0; i < examples_.size(); ++i)
            if (exclude == nullptr || examples_[i].match_id != *exclude) cand.push_back(i);
    }
    if (cand.empty()) {
        throw ValidationError("kNN: no candidates for stage (overs_remaining=" + std::to_string(overs_remaining) +
                              ", wickets_lost=" + std::to_string(wickets_lost) + ") after all relaxations");
    }
    std::sort(cand.begin(), cand.end());

    const auto q = scaler_.apply(x);
    std::vector<double> dist(cand.size());
    for (std::size_t c = 0; c < cand.size(); ++c) {
        const auto& z = z_[cand[c]];
        double s = 0.0;
        for (std::size_t j = 0; j < q.size(); ++j) {
            const double d = q[j] - z[j];
            s += d * d;
        }
        dist[c] = std::sqrt(s);
    }

    std::vector<std::size_t> use(cand.size());
    std::iota(use.begin(), use.end(), std::size_t{0});
    if (params.max_neighbors && *params.max_neighbors < use.size()) {
        if (*params.max_neighbors == 0) throw ValidationError("kNN: max_neighbors must be >= 1");
        std::stable_sort(use.begin(), use.end(), [&](auto a, auto b) { return dist[a] < dist[b]; });
        use.resize(*params.max_neighbors);
        std::sort(use.begin(), use.end());
    }

    const double dmin = std::transform_reduce(use.begin(), use.end(), std::numeric_limits<double>::infinity(),
                                              [](double a, double b) { return std::min(a, b); },
                                              [&](std::size_t c) { return dist[c]; });
    double num = 0.0;
    double den = 0.0;
    for (auto c : use) {
        double w = 0.0;
        if (params.weighting == KnnWeighting::InverseDistance) {
            w = 1.0 / (dist[c] + params.epsilon);
        } else {
            w = std::exp(-(dist[c] - dmin) / params.softmax_temperature);
        }
        num += w * examples_[cand[c]].actual_remaining;
        den += w;
    }
    out.value = std::max(0.0, num / den);
    out.candidates = use.size();
    return out;
}

}  // namespace camp
