#include <benchmark/benchmark.h>

#include "sclaw/ensemble.hpp"
#include "sclaw/linalg.hpp"
#include "sclaw/potential.hpp"
#include "sclaw/process.hpp"

namespace {

using namespace sclaw;

ComplexDenseMatrix shifted_sample(std::size_t n, double d) {
    auto a = sample_matrix(n, n, d / static_cast<double>(n), XiSpec::rademacher(), 7).to_dense();
    const double scale = 1.0 / std::sqrt(d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = scale * a(i, j) - (i == j ? cplx(1.0) : cplx(0.0));
    return a;
}

void singular_values(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = shifted_sample(n, 8.0);
    for (auto _ : state) benchmark::DoNotOptimize(linalg::singular_values(a));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(singular_values)->RangeMultiplier(2)->Range(32, 256)->Unit(benchmark::kMillisecond)->Complexity();

void eigenvalues(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = shifted_sample(n, 8.0);
    for (auto _ : state) benchmark::DoNotOptimize(linalg::eigenvalues(a));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(eigenvalues)->RangeMultiplier(2)->Range(32, 256)->Unit(benchmark::kMillisecond)->Complexity();

void sample(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::uint64_t seed = 1;
    for (auto _ : state) benchmark::DoNotOptimize(sample_matrix(n, n, 20.0 / static_cast<double>(n), XiSpec::rademacher(), seed++));
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(sample)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

void truncated_potentials(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto s = sample_matrix(n, n, 20.0 / static_cast<double>(n), XiSpec::rademacher(), 3);
    for (auto _ : state) benchmark::DoNotOptimize(potential_report(s, cplx(1.0), 0.1));
}
BENCHMARK(truncated_potentials)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

// One full run of the growth process; each step refreshes a singular spectrum.
void process_run(benchmark::State& state) {
    ProcessParams params;
    params.n = static_cast<std::size_t>(state.range(0));
    params.p = 10.0 / static_cast<double>(params.n);
    params.xi = XiSpec::rademacher();
    params.config.eps = 0.2;
    std::uint64_t seed = 1;
    for (auto _ : state) {
        params.seed = seed++;
        benchmark::DoNotOptimize(run_process(params));
    }
    state.SetItemsProcessed(state.iterations() * 2 * state.range(0));
}
BENCHMARK(process_run)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
