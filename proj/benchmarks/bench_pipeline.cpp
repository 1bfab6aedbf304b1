#include <benchmark/benchmark.h>

#include <sstream>

#include "camp/ingest.hpp"
#include "camp/lnc.hpp"
#include "camp/scoring.hpp"
#include "camp/synthetic.hpp"

using namespace camp;

namespace {

GeneratedData league(int n) {
    GeneratorConfig g;
    g.n_matches = n;
    return generate(g);
}

}  // namespace

static void BM_Generate(benchmark::State& state) {
    GeneratorConfig g;
    g.n_matches = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(generate(g));
}
BENCHMARK(BM_Generate)->Arg(120)->Unit(benchmark::kMillisecond);

static void BM_IngestRoundTrip(benchmark::State& state) {
    const auto d = league(static_cast<int>(state.range(0)));
    const auto balls = serialize_balls(d.balls);
    const auto sums = serialize_summaries(d.summaries);
    const auto lineups = lineups_csv(d);
    for (auto _ : state) {
        std::istringstream b(balls);
        std::istringstream s(sums);
        std::istringstream l(lineups);
        benchmark::DoNotOptimize(assemble_matches(parse_balls(b), parse_summaries(s, {}), parse_lineups(l)));
    }
}
BENCHMARK(BM_IngestRoundTrip)->Arg(120)->Unit(benchmark::kMillisecond);

static void BM_LncRateMatches(benchmark::State& state) {
    const auto d = league(static_cast<int>(state.range(0)));
    const auto res = assemble_matches(d.balls, d.summaries, d.lineups);
    const auto& table = ResourceTable::standard();
    const ScoringParams params;
    for (auto _ : state)
        for (const auto& m : res.matches) benchmark::DoNotOptimize(lnc_rate_match(m, table, params));
}
BENCHMARK(BM_LncRateMatches)->Arg(120)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
