#include <benchmark/benchmark.h>

#include <vector>

#include "estlab/datasets.hpp"
#include "estlab/sampling_oracle.hpp"

using namespace estlab;

namespace {

FinitePopulation bench_population(std::size_t N) {
    PopulationColumns c;
    c.x = std::vector<double>();
    for (std::size_t i = 0; i < N; ++i) {
        const double x = 10 + static_cast<double>((i * 37) % 23);
        c.x->push_back(x);
        c.y.push_back(2 * x + static_cast<double>((i * 11) % 7));
    }
    return FinitePopulation(c);
}

std::vector<EstimatorSpec> estimators(double X) {
    return {{"ybar", [](const Draw& d) { return sample_mean(d.pop->y(), d.units); }, 0},
            {"ratio", [X](const Draw& d) { return sample_mean(d.pop->y(), d.units) * X / sample_mean(d.pop->x(), d.units); }, 0}};
}

void BM_Enumerate(benchmark::State& state) {
    const FinitePopulation pop = bench_population(24);
    DesignSpec spec;
    spec.n = 6;  // 134596 samples
    const auto est = estimators(summarize_numeric(pop).meanX);
    const auto exec = state.range(0) ? Execution::parallel : Execution::serial;
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_design(pop, spec, est, exec));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(binomial(24, 6)));
}

void BM_MonteCarlo(benchmark::State& state) {
    const FinitePopulation pop = bench_population(200);
    DesignSpec spec;
    spec.n = 20;
    spec.replicates = 100000;
    const auto est = estimators(summarize_numeric(pop).meanX);
    const auto exec = state.range(0) ? Execution::parallel : Execution::serial;
    for (auto _ : state) benchmark::DoNotOptimize(monte_carlo(pop, spec, est, exec));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(spec.replicates));
}

}  // namespace

BENCHMARK(BM_Enumerate)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarlo)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
