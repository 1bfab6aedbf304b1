#include <benchmark/benchmark.h>

#include <random>

#include "camp/projection.hpp"

using namespace camp;

namespace {

std::vector<TrainingExample> random_store(std::size_t n, std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> z(0.0, 1.0);
    std::vector<TrainingExample> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        TrainingExample e;
        e.match_id = "M" + std::to_string(i / 50);
        e.overs_remaining = 1 + static_cast<int>(i % 50);
        e.wickets_lost = static_cast<int>((i / 50) % 6);
        e.actual_remaining = 150.0 + 50.0 * z(gen);
        for (std::size_t d = 0; d < dim; ++d) e.x.push_back(z(gen));
        out.push_back(std::move(e));
    }
    return out;
}

void split(const std::vector<TrainingExample>& ex, std::vector<std::vector<double>>& x, std::vector<double>& y) {
    for (const auto& e : ex) {
        x.push_back(e.x);
        y.push_back(e.actual_remaining);
    }
}

}  // namespace

static void BM_KnnPredict(benchmark::State& state) {
    const auto store = random_store(static_cast<std::size_t>(state.range(0)), 40, 1);
    const KnnStore knn(store);
    const KnnParams params;
    std::size_t i = 0;
    for (auto _ : state) {
        const auto& q = store[i++ % store.size()];
        benchmark::DoNotOptimize(knn.predict(q.x, q.overs_remaining, q.wickets_lost, &q.match_id, params));
    }
}
BENCHMARK(BM_KnnPredict)->Arg(6000)->Arg(60000);

static void BM_RidgeFit(benchmark::State& state) {
    std::vector<std::vector<double>> x;
    std::vector<double> y;
    split(random_store(static_cast<std::size_t>(state.range(0)), 40, 2), x, y);
    for (auto _ : state) benchmark::DoNotOptimize(ridge_fit(x, y, 1.0));
}
BENCHMARK(BM_RidgeFit)->Arg(6000)->Unit(benchmark::kMillisecond);

static void BM_ForestFit(benchmark::State& state) {
    std::vector<std::vector<double>> x;
    std::vector<double> y;
    split(random_store(3000, 40, 3), x, y);
    ForestParams p;
    p.n_trees = static_cast<int>(state.range(0));
    p.seed = 7;
    for (auto _ : state) benchmark::DoNotOptimize(forest_fit(x, y, p));
}
BENCHMARK(BM_ForestFit)->Arg(10)->Unit(benchmark::kMillisecond);
