#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "camp/projection.hpp"

namespace camp {

namespace {

// Mean anchored at the first value, so identical inputs reproduce that value exactly.
template <class It, class F>
double anchored_mean(It first, It last, F value) {
    const double a = value(*first);
    double s = 0.0;
    std::size_t n = 0;
    for (auto it = first; it != last; ++it, ++n) s += value(*it) - a;
    return a + s / static_cast<double>(n);
}

class TreeBuilder {
public:
    TreeBuilder(std::span<const std::vector<double>> x, std::span<const double> y, const ForestParams& params,
                Rng& rng)
        : x_(x), y_(y), params_(params), rng_(rng), dim_(x.front().size()) {
        const auto m = static_cast<std::size_t>(std::lround(params.feature_frac * static_cast<double>(dim_)));
        mtry_ = std::clamp<std::size_t>(m, 1, dim_);
        features_.resize(dim_);
        std::iota(features_.begin(), features_.end(), std::size_t{0});
    }

    RegressionTree build(std::vector<std::size_t> idx) {
        idx_ = std::move(idx);
        grow(0, idx_.size(), 0);
        return std::move(tree_);
    }

private:
    std::span<const std::vector<double>> x_;
    std::span<const double> y_;
    const ForestParams& params_;
    Rng& rng_;
    std::size_t dim_;
    std::size_t mtry_ = 1;
    std::vector<std::size_t> features_;
    std::vector<std::size_t> idx_;
    std::vector<std::pair<double, double>> buf_;
    RegressionTree tree_;

    int grow(std::size_t lo, std::size_t hi, int depth) {
        const auto node = static_cast<int>(tree_.nodes.size());
        tree_.nodes.emplace_back();
        const std::size_t n = hi - lo;
        const auto first = idx_.begin() + static_cast<std::ptrdiff_t>(lo);
        const auto last = idx_.begin() + static_cast<std::ptrdiff_t>(hi);
        tree_.nodes[static_cast<std::size_t>(node)].value = anchored_mean(first, last, [&](auto i) { return y_[i]; });

        const auto [ymin, ymax] = std::minmax_element(first, last, [&](auto a, auto b) { return y_[a] < y_[b]; });
        const auto min_leaf = static_cast<std::size_t>(std::max(1, params_.min_leaf));
        if (depth >= params_.max_depth || n < 2 * min_leaf || y_[*ymin] == y_[*ymax]) return node;

        double sum = 0.0;
        for (auto it = first; it != last; ++it) sum += y_[*it];
        const double parent = sum * sum / static_cast<double>(n);

        for (std::size_t k = 0; k < mtry_; ++k) {
            const auto r = k + uniform_index(rng_, dim_ - k);
            std::swap(features_[k], features_[r]);
        }

        double best_score = parent + 1e-9 * std::max(1.0, std::abs(parent));
        int best_f = -1;
        double best_t = 0.0;
        buf_.resize(n);
        for (std::size_t k = 0; k < mtry_; ++k) {
            const auto f = features_[k];
            for (std::size_t i = 0; i < n; ++i) {
                const auto s = idx_[lo + i];
                buf_[i] = {x_[s][f], y_[s]};
            }
            std::sort(buf_.begin(), buf_.end());
            if (buf_.front().first == buf_.back().first) continue;
            double left = 0.0;
            for (std::size_t i = 0; i + 1 < n; ++i) {
                left += buf_[i].second;
                const std::size_t nl = i + 1;
                if (nl < min_leaf) continue;
                if (n - nl < min_leaf) break;
                if (buf_[i].first == buf_[i + 1].first) continue;
                const double right = sum - left;
                const double score = left * left / static_cast<double>(nl) +
                                     right * right / static_cast<double>(n - nl);
                if (score > best_score) {
                    best_score = score;
                    best_f = static_cast<int>(f);
                    double t = 0.5 * (buf_[i].first + buf_[i + 1].first);
                    if (!(t < buf_[i + 1].first)) t = buf_[i].first;
                    best_t = t;
                }
            }
        }
        if (best_f < 0) return node;

        const auto f = static_cast<std::size_t>(best_f);
        const auto mid = std::stable_partition(first, last, [&](auto i) { return x_[i][f] <= best_t; });
        const auto split = static_cast<std::size_t>(mid - idx_.begin());
        const int l = grow(lo, split, depth + 1);
        const int r = grow(split, hi, depth + 1);
        auto& nd = tree_.nodes[static_cast<std::size_t>(node)];
        nd.feature = best_f;
        nd.threshold = best_t;
        nd.left = l;
        nd.right = r;
        return node;
    }
};

}  // namespace

double RegressionTree::predict(std::span<const double> x) const {
    std::size_t i = 0;
    while (nodes[i].feature >= 0) {
        const auto& nd = nodes[i];
        i = static_cast<std::size_t>(x[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left : nd.right);
    }
    return nodes[i].value;
}

int RegressionTree::depth() const {
    std::vector<int> d(nodes.size(), 0);
    int best = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        best = std::max(best, d[i]);
        if (nodes[i].feature >= 0) {
            d[static_cast<std::size_t>(nodes[i].left)] = d[i] + 1;
            d[static_cast<std::size_t>(nodes[i].right)] = d[i] + 1;
        }
    }
    return best;
}

RegressionTree fit_tree(std::span<const std::vector<double>> x, std::span<const double> y,
                        std::span<const std::size_t> sample, const ForestParams& params, Rng& rng) {
    if (sample.empty()) throw ValidationError("fit_tree: empty sample");
    TreeBuilder b(x, y, params, rng);
    return b.build(std::vector<std::size_t>(sample.begin(), sample.end()));
}

ForestModel forest_fit(std::span<const std::vector<double>> x, std::span<const double> y,
                       const ForestParams& params) {
    if (x.size() != y.size()) throw ValidationError("forest_fit: x and y lengths differ");
    if (params.n_trees < 1) throw ValidationError("forest_fit: n_trees must be >= 1");
    if (params.max_depth < 0) throw ValidationError("forest_fit: max_depth must be >= 0");
    if (params.min_leaf < 1) throw ValidationError("forest_fit: min_leaf must be >= 1");
    if (!(params.feature_frac > 0.0 && params.feature_frac <= 1.0)) {
        throw ValidationError("forest_fit: feature_frac must be in (0, 1]");
    }
    if (x.size() < static_cast<std::size_t>(params.min_leaf) || x.empty()) {
        throw ValidationError("forest_fit: need at least min_leaf=" + std::to_string(params.min_leaf) +
                              " examples, got " + std::to_string(x.size()));
    }
    const std::size_t dim = x.front().size();
    for (const auto& r : x)
        if (r.size() != dim) throw ValidationError("forest_fit: ragged feature rows");

    ForestModel m;
    m.params = params;
    m.dim = dim;
    m.trees.reserve(static_cast<std::size_t>(params.n_trees));
    std::vector<std::size_t> sample(x.size());
    for (int t = 0; t < params.n_trees; ++t) {
        Rng rng(derive_seed(params.seed, static_cast<std::uint64_t>(t)));
        for (auto& s : sample) s = uniform_index(rng, x.size());
        m.trees.push_back(fit_tree(x, y, sample, params, rng));
    }
    return m;
}

double ForestModel::mean_prediction(std::span<const double> x) const {
    if (x.size() != dim) {
        throw ValidationError("forest: expected " + std::to_string(dim) + " features, got " +
                              std::to_string(x.size()));
    }
    if (trees.empty()) throw ValidationError("forest: no trees");
    return anchored_mean(trees.begin(), trees.end(), [&](const RegressionTree& t) { return t.predict(x); });
}

double ForestModel::predict(std::span<const double> x) const { return std::max(0.0, mean_prediction(x)); }

void to_json(nlohmann::json& j, const ForestModel& m) {
    auto trees = nlohmann::json::array();
    for (const auto& t : m.trees) {
        std::vector<int> feature, left, right;
        std::vector<double> threshold, value;
        for (const auto& nd : t.nodes) {
            feature.push_back(nd.feature);
            threshold.push_back(nd.threshold);
            left.push_back(nd.left);
            right.push_back(nd.right);
            value.push_back(nd.value);
        }
        trees.push_back({{"feature", feature}, {"threshold", threshold}, {"left", left}, {"right", right},
                         {"value", value}});
    }
    j = nlohmann::json{{"params",
                        {{"n_trees", m.params.n_trees},
                         {"max_depth", m.params.max_depth},
                         {"min_leaf", m.params.min_leaf},
                         {"feature_frac", m.params.feature_frac},
                         {"seed", m.params.seed}}},
                       {"dim", m.dim},
                       {"trees", trees}};
}

void from_json(const nlohmann::json& j, ForestModel& m) {
    try {
        const auto& p = j.at("params");
        m.params.n_trees = p.at("n_trees").get<int>();
        m.params.max_depth = p.at("max_depth").get<int>();
        m.params.min_leaf = p.at("min_leaf").get<int>();
        m.params.feature_frac = p.at("feature_frac").get<double>();
        m.params.seed = p.at("seed").get<std::uint64_t>();
        m.dim = j.at("dim").get<std::size_t>();
        m.trees.clear();
        for (const auto& t : j.at("trees")) {
            const auto feature = t.at("feature").get<std::vector<int>>();
            const auto threshold = t.at("threshold").get<std::vector<double>>();
            const auto left = t.at("left").get<std::vector<int>>();
            const auto right = t.at("right").get<std::vector<int>>();
            const auto value = t.at("value").get<std::vector<double>>();
            const auto n = feature.size();
            if (n == 0 || threshold.size() != n || left.size() != n || right.size() != n || value.size() != n) {
                throw ValidationError("forest model JSON: inconsistent node arrays");
            }
            RegressionTree tree;
            for (std::size_t i = 0; i < n; ++i) {
                if (feature[i] >= 0 &&
                    (feature[i] >= static_cast<int>(m.dim) || left[i] <= static_cast<int>(i) ||
                     right[i] <= static_cast<int>(i) || left[i] >= static_cast<int>(n) ||
                     right[i] >= static_cast<int>(n))) {
                    throw ValidationError("forest model JSON: malformed node " + std::to_string(i));
                }
                tree.nodes.push_back(TreeNode{feature[i], threshold[i], left[i], right[i], value[i]});
            }
            m.trees.push_back(std::move(tree));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("forest model JSON: ") + e.what());
    }
}

}  // namespace camp
