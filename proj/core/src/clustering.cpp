#include "camp/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <nlohmann/json.hpp>

namespace camp {

std::string_view to_string(EntityKind k) noexcept {
    switch (k) {
        case EntityKind::Team: return "team";
        case EntityKind::Batter: return "batter";
        case EntityKind::Bowler: return "bowler";
    }
    return "team";
}

namespace {

EntityKind parse_entity_kind(const std::string& s) {
    if (s == "team") return EntityKind::Team;
    if (s == "batter") return EntityKind::Batter;
    if (s == "bowler") return EntityKind::Bowler;
    throw ValidationError("unknown entity kind '" + s + "'");
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double norm(std::span<const double> a) {
    double s = 0.0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
}

}  // namespace

// --- standardizer -----------------------------------------------------------

Standardizer Standardizer::fit(std::span<const std::vector<double>> rows) {
    if (rows.empty()) throw ValidationError("Standardizer::fit: no rows");
    const std::size_t dim = rows.front().size();
    Standardizer s;
    s.mean.assign(dim, 0.0);
    s.scale.assign(dim, 1.0);
    for (const auto& r : rows) {
        if (r.size() != dim) throw ValidationError("Standardizer::fit: ragged rows");
        for (std::size_t j = 0; j < dim; ++j) s.mean[j] += r[j];
    }
    for (auto& m : s.mean) m /= static_cast<double>(rows.size());
    std::vector<double> var(dim, 0.0);
    for (const auto& r : rows)
        for (std::size_t j = 0; j < dim; ++j) {
            const double d = r[j] - s.mean[j];
            var[j] += d * d;
        }
    for (std::size_t j = 0; j < dim; ++j) {
        const double sd = std::sqrt(var[j] / static_cast<double>(rows.size()));
        if (sd > 1e-12 * std::max(1.0, std::abs(s.mean[j]))) {
            s.scale[j] = sd;
        } else {
            s.mean[j] = 0.0;
            s.scale[j] = 1.0;
        }
    }
    return s;
}

Standardizer Standardizer::identity(std::size_t dim) {
    return Standardizer{std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0)};
}

std::vector<double> Standardizer::apply(std::span<const double> v) const {
    if (v.size() != mean.size()) {
        throw ValidationError("dimension mismatch: expected " + std::to_string(mean.size()) + ", got " +
                              std::to_string(v.size()));
    }
    std::vector<double> out(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) out[j] = (v[j] - mean[j]) / scale[j];
    return out;
}

// --- k-means ----------------------------------------------------------------

std::size_t nearest_centroid(std::span<const std::vector<double>> centroids, std::span<const double> v) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.size(); ++c) {
        const double d = squared_distance(centroids[c], v);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

KMeansResult kmeans_fit(std::span<const LabeledVector> points, const KMeansParams& params) {
    if (params.k < 1) throw ValidationError("kmeans_fit: k must be >= 1");
    if (params.max_iters < 1) throw ValidationError("kmeans_fit: max_iters must be >= 1");

    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return points[a].id < points[b].id; });

    KMeansResult res;
    std::vector<std::vector<double>> x;
    x.reserve(points.size());
    for (auto i : order) {
        if (!res.ids.empty() && res.ids.back() == points[i].id) {
            throw ValidationError("kmeans_fit: duplicate id '" + points[i].id + "'");
        }
        res.ids.push_back(points[i].id);
        x.push_back(points[i].values);
    }
    const std::size_t n = x.size();
    const std::size_t k = static_cast<std::size_t>(params.k);
    if (n == 0) throw ValidationError("kmeans_fit: no points");
    const std::size_t dim = x.front().size();
    for (const auto& r : x)
        if (r.size() != dim) throw ValidationError("kmeans_fit: points have differing dimensions");
    {
        std::set<std::vector<double>> distinct(x.begin(), x.end());
        if (distinct.size() < k) {
            throw ValidationError("kmeans_fit: " + std::to_string(distinct.size()) +
                                  " distinct points, fewer than k=" + std::to_string(k));
        }
    }

    // k-means++ seeding
    Rng rng(params.seed);
    std::vector<std::vector<double>> centroids;
    centroids.push_back(x[uniform_index(rng, n)]);
    std::vector<double> d2(n);
    while (centroids.size() < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            d2[i] = squared_distance(x[i], centroids[nearest_centroid(centroids, x[i])]);
            total += d2[i];
        }
        const double r = unit_uniform(rng) * total;
        double acc = 0.0;
        std::size_t pick = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (d2[i] <= 0.0) continue;
            acc += d2[i];
            if (acc > r) {
                pick = i;
                break;
            }
        }
        if (pick == n) {  // rounding at the top of the cumulative sum
            for (std::size_t i = n; i-- > 0;)
                if (d2[i] > 0.0) {
                    pick = i;
                    break;
                }
        }
        centroids.push_back(x[pick]);
    }

    std::vector<int> labels(n, 0);
    auto assign_step = [&] {
        double inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = nearest_centroid(centroids, x[i]);
            labels[i] = static_cast<int>(c);
            inertia += squared_distance(x[i], centroids[c]);
        }
        return inertia;
    };

    for (int it = 0; it < params.max_iters; ++it) {
        res.inertia_history.push_back(assign_step());
        res.iterations = it + 1;

        std::vector<std::vector<double>> next(k, std::vector<double>(dim, 0.0));
        std::vector<std::size_t> count(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            auto& c = next[static_cast<std::size_t>(labels[i])];
            for (std::size_t j = 0; j < dim; ++j) c[j] += x[i][j];
            ++count[static_cast<std::size_t>(labels[i])];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (count[c] == 0) continue;
            for (auto& v : next[c]) v /= static_cast<double>(count[c]);
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (count[c] != 0) continue;
            // Empty cluster: move it onto the point worst served by its centroid.
            std::size_t far = 0;
            double far_d = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = squared_distance(x[i], centroids[static_cast<std::size_t>(labels[i])]);
                if (d > far_d && count[static_cast<std::size_t>(labels[i])] > 1) {
                    far_d = d;
                    far = i;
                }
            }
            next[c] = x[far];
            --count[static_cast<std::size_t>(labels[far])];
            labels[far] = static_cast<int>(c);
            count[c] = 1;
        }

        double shift = 0.0;
        double scale = 1.0;
        for (std::size_t c = 0; c < k; ++c) {
            shift = std::max(shift, std::sqrt(squared_distance(next[c], centroids[c])));
            scale = std::max(scale, norm(centroids[c]));
        }
        centroids = std::move(next);
        if (shift <= params.tol * scale) {
            res.converged = true;
            break;
        }
    }
    res.inertia = assign_step();
    res.inertia_history.push_back(res.inertia);
    res.labels = labels;
    res.centroids = std::move(centroids);
    return res;
}

// --- models -----------------------------------------------------------------

int assign(const ClusterModel& model, std::span<const double> raw) {
    if (raw.size() != model.dim) {
        throw ValidationError("assign: dimension mismatch: model has " + std::to_string(model.dim) +
                              ", vector has " + std::to_string(raw.size()));
    }
    if (model.centroids.empty()) return model.dummy_cluster();
    const auto z = model.scaler.apply(raw);
    return static_cast<int>(nearest_centroid(model.centroids, z)) + 1;
}

int assign(const ClusterModel& model, std::span<const double> raw, bool empty_history) {
    if (empty_history) {
        if (raw.size() != model.dim) throw ValidationError("assign: dimension mismatch");
        return model.dummy_cluster();
    }
    return assign(model, raw);
}

ClusterModel fit_cluster_model(EntityKind kind, std::span<const LabeledVector> points,
                               const std::vector<bool>& empty_history, int k, std::uint64_t seed,
                               const ClusteringConfig& config) {
    if (empty_history.size() != points.size()) throw ValidationError("fit_cluster_model: flag count mismatch");
    if (points.empty()) throw ValidationError("fit_cluster_model: no entities");
    ClusterModel m;
    m.kind = kind;
    m.k = k;
    m.seed = seed;
    m.dim = points.front().values.size();

    std::vector<LabeledVector> active;
    std::vector<std::vector<double>> raw;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].values.size() != m.dim) throw ValidationError("fit_cluster_model: ragged vectors");
        if (empty_history[i]) {
            m.assignments[points[i].id] = m.dummy_cluster();
        } else {
            active.push_back(points[i]);
            raw.push_back(points[i].values);
        }
    }
    if (active.empty()) {
        m.scaler = Standardizer::identity(m.dim);
        return m;
    }
    m.scaler = config.standardize ? Standardizer::fit(raw) : Standardizer::identity(m.dim);
    for (auto& a : active) a.values = m.scaler.apply(a.values);

    const auto res = kmeans_fit(active, KMeansParams{k, seed, config.max_iters, config.tol});
    m.centroids = res.centroids;
    m.inertia = res.inertia;
    m.inertia_history = res.inertia_history;
    for (std::size_t i = 0; i < res.ids.size(); ++i) m.assignments[res.ids[i]] = res.labels[i] + 1;
    return m;
}

ClusterModel fit_team_model(std::span<const TeamFeatures> teams, const ClusteringConfig& config, std::uint64_t seed) {
    std::vector<LabeledVector> pts;
    for (const auto& t : teams) pts.push_back({t.team, t.vector});
    return fit_cluster_model(EntityKind::Team, pts, std::vector<bool>(pts.size(), false), config.team_k,
                             derive_seed(seed, 0), config);
}

ClusterModels cluster_all(std::span<const TeamFeatures> teams, std::span<const BatterFeatures> batters,
                          std::span<const BowlerFeatures> bowlers, const ClusteringConfig& config,
                          std::uint64_t seed) {
    ClusterModels out;
    out.teams = fit_team_model(teams, config, seed);
    {
        std::vector<LabeledVector> pts;
        std::vector<bool> empty;
        for (const auto& b : batters) {
            pts.push_back({b.player, b.vector});
            empty.push_back(b.never_batted);
        }
        out.batters = fit_cluster_model(EntityKind::Batter, pts, empty, config.batter_k, derive_seed(seed, 1), config);
    }
    {
        std::vector<LabeledVector> pts;
        std::vector<bool> empty;
        for (const auto& b : bowlers) {
            pts.push_back({b.player, b.vector});
            empty.push_back(b.never_bowled);
        }
        out.bowlers = fit_cluster_model(EntityKind::Bowler, pts, empty, config.bowler_k, derive_seed(seed, 2), config);
    }
    return out;
}

ClusterAssignments to_assignments(const ClusterModels& models) {
    ClusterAssignments a;
    a.teams = models.teams.assignments;
    a.batters = models.batters.assignments;
    a.bowlers = models.bowlers.assignments;
    a.batter_slots = models.batters.dummy_cluster();
    a.bowler_slots = models.bowlers.dummy_cluster();
    return a;
}

TeamClusterMap team_cluster_map(const ClusterModel& teams) {
    return TeamClusterMap(teams.assignments.begin(), teams.assignments.end());
}

// --- JSON -------------------------------------------------------------------

void to_json(nlohmann::json& j, const ClusterModel& m) {
    j = nlohmann::json{{"kind", to_string(m.kind)},
                       {"k", m.k},
                       {"seed", m.seed},
                       {"dim", m.dim},
                       {"scaler", {{"mean", m.scaler.mean}, {"scale", m.scaler.scale}}},
                       {"centroids", m.centroids},
                       {"assignments", m.assignments},
                       {"inertia", m.inertia}};
}

void from_json(const nlohmann::json& j, ClusterModel& m) {
    try {
        m.kind = parse_entity_kind(j.at("kind").get<std::string>());
        m.k = j.at("k").get<int>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.dim = j.at("dim").get<std::size_t>();
        m.scaler.mean = j.at("scaler").at("mean").get<std::vector<double>>();
        m.scaler.scale = j.at("scaler").at("scale").get<std::vector<double>>();
        m.centroids = j.at("centroids").get<std::vector<std::vector<double>>>();
        m.assignments = j.at("assignments").get<std::map<std::string, int>>();
        m.inertia = j.at("inertia").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("cluster model JSON: ") + e.what());
    }
    if (m.scaler.dim() != m.dim) throw ValidationError("cluster model JSON: scaler dimension mismatch");
    for (const auto& c : m.centroids)
        if (c.size() != m.dim) throw ValidationError("cluster model JSON: centroid dimension mismatch");
    if (!m.centroids.empty() && static_cast<int>(m.centroids.size()) != m.k) {
        throw ValidationError("cluster model JSON: centroid count != k");
    }
}

}  // namespace camp
