// Microbenchmarks for the hot paths: weight construction, closed-form
// moments, full tests, one sweep step, and the generators feeding them.
#include <benchmark/benchmark.h>

#include <cstdint>

#include "ghd/netgen.hpp"
#include "ghd/rng.hpp"
#include "ghd/stat.hpp"
#include "ghd/subnetwork.hpp"
#include "ghd/weights.hpp"

namespace {

ghd::LabeledGraph rg(int n, std::uint64_t seed) { return ghd::random_geometric(n, 0.3, seed); }

void BM_TopologicalOverlap(benchmark::State& state) {
    ghd::LabeledGraph g = rg(static_cast<int>(state.range(0)), 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(ghd::make_weights(g, ghd::WeightScheme::topological_overlap));
}
BENCHMARK(BM_TopologicalOverlap)->Arg(100)->Arg(250)->Arg(1000);

void BM_PermutationMoments(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    ghd::WeightMatrix a = ghd::make_weights(rg(n, 1), ghd::WeightScheme::topological_overlap);
    ghd::WeightMatrix b = ghd::make_weights(rg(n, 2), ghd::WeightScheme::topological_overlap);
    for (auto _ : state) benchmark::DoNotOptimize(ghd::permutation_moments(a, b));
}
BENCHMARK(BM_PermutationMoments)->Arg(100)->Arg(250)->Arg(1000);

void BM_FullTest(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    ghd::LabeledGraph a = rg(n, 1);
    ghd::LabeledGraph b = ghd::shuffle_edges(a, 0.5, 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(ghd::ghd_test(a, b, ghd::WeightScheme::topological_overlap));
}
BENCHMARK(BM_FullTest)->Arg(100)->Arg(250);

void BM_DetectSweep(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    ghd::LabeledGraph a = rg(n, 1);
    ghd::LabeledGraph b = ghd::shuffle_edges(a, 0.5, 3);
    ghd::DetectionConfig cfg;
    cfg.n_min = n / 2;
    for (auto _ : state) benchmark::DoNotOptimize(ghd::detect(a, b, cfg));
}
BENCHMARK(BM_DetectSweep)->Arg(60)->Arg(120);

void BM_GenerateGeometric(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(ghd::random_geometric(n, 0.3, ++seed));
}
BENCHMARK(BM_GenerateGeometric)->Arg(250)->Arg(1000);

void BM_GenerateScaleFree(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(ghd::scale_free(n, 1.6, ++seed));
}
BENCHMARK(BM_GenerateScaleFree)->Arg(250)->Arg(1000);

} // namespace

BENCHMARK_MAIN();
