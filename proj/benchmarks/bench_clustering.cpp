#include <benchmark/benchmark.h>

#include <cstdio>
#include <random>

#include "camp/clustering.hpp"

using namespace camp;

static void BM_KMeans(benchmark::State& state) {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<LabeledVector> pts;
    for (int i = 0; i < state.range(0); ++i) {
        char id[16];
        std::snprintf(id, sizeof id, "P%05d", i);
        std::vector<double> v(24);
        for (auto& x : v) x = u(gen);
        pts.push_back({id, std::move(v)});
    }
    KMeansParams p;
    p.k = 4;
    p.seed = 9;
    for (auto _ : state) benchmark::DoNotOptimize(kmeans_fit(pts, p));
}
BENCHMARK(BM_KMeans)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
