#include <benchmark/benchmark.h>
#include <omp.h>

#include <numbers>
#include <vector>

#include "facets/metrics.hpp"
#include "facets/phase.hpp"
#include "facets/sampler.hpp"
#include "facets/wulff.hpp"

namespace {

using namespace facets;

void BM_oracle_serial(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(brute_force_oracle_serial(4.5, std::numbers::pi, 1.0, 6, 1e-4));
}
BENCHMARK(BM_oracle_serial)->Unit(benchmark::kMillisecond);

void BM_oracle_parallel(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(brute_force_oracle(4.5, std::numbers::pi, 1.0, 6, 1e-4));
}
BENCHMARK(BM_oracle_parallel)->Unit(benchmark::kMillisecond);

struct Shapes {
    CurveSet p, q;
    Shapes() {
        const WulffGeometry g = build_wulff(Norm::killed_walk(3.0));
        p = {optimal_shape(g, 1.2).polygon, optimal_shape(g, 3.6).polygon};
        q = {optimal_shape(g, 1.3).polygon, optimal_shape(g, 3.5).polygon};
    }
};

const Shapes& shapes() {
    static const Shapes s;
    return s;
}

void BM_hausdorff_serial(benchmark::State& state) {
    const auto& s = shapes();
    for (auto _ : state) benchmark::DoNotOptimize(hausdorff_serial(s.p, s.q));
}
BENCHMARK(BM_hausdorff_serial)->Unit(benchmark::kMillisecond);

void BM_hausdorff_parallel(benchmark::State& state) {
    const auto& s = shapes();
    for (auto _ : state) benchmark::DoNotOptimize(hausdorff(s.p, s.q));
}
BENCHMARK(BM_hausdorff_parallel)->Unit(benchmark::kMillisecond);

ChainConfig chain_config() {
    ChainConfig c;
    c.params.N = 24;
    c.params.beta = 3.0;
    c.params.p_v = 0.1;
    c.params.p_s = 0.9;
    c.params.A = 2.0;
    c.sweeps = 500;
    c.burn_in = 100;
    c.thinning = 50;
    return c;
}

void BM_chains_serial(benchmark::State& state) {
    const ChainConfig c = chain_config();
    const int chains = static_cast<int>(state.range(0));
    for (auto _ : state) {
        std::vector<std::size_t> sizes(static_cast<std::size_t>(chains));
        for (int t = 0; t < chains; ++t) sizes[static_cast<std::size_t>(t)] = run_chain(c, static_cast<std::uint64_t>(t)).size();
        benchmark::DoNotOptimize(sizes.data());
    }
}
BENCHMARK(BM_chains_serial)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_chains_parallel(benchmark::State& state) {
    const ChainConfig c = chain_config();
    const int chains = static_cast<int>(state.range(0));
    for (auto _ : state) {
        std::vector<std::size_t> sizes(static_cast<std::size_t>(chains));
#pragma omp parallel for schedule(dynamic, 1)
        for (int t = 0; t < chains; ++t) sizes[static_cast<std::size_t>(t)] = run_chain(c, static_cast<std::uint64_t>(t)).size();
        benchmark::DoNotOptimize(sizes.data());
    }
    state.counters["threads"] = omp_get_max_threads();
}
BENCHMARK(BM_chains_parallel)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
