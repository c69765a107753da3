#include <benchmark/benchmark.h>

#include "entlab/complexity.hpp"
#include "entlab/entropies.hpp"
#include "entlab/kummer.hpp"
#include "entlab/spectra.hpp"


using namespace entlab;

static void BM_SampleAndSpectrum(benchmark::State& state)
{
    const int N = static_cast<int>(state.range(0));
    EnsembleSpec spec = build_family(Family::BE, {.mu = 1.0}, N, N);
    Engine rng = make_stream(1, {});
    for (auto _ : state) {
        SchmidtSpectrum s = schmidt_spectrum(sample_state_matrix(spec, rng));
        benchmark::DoNotOptimize(entropy_record(s).R1);
    }
}
BENCHMARK(BM_SampleAndSpectrum)->Arg(16)->Arg(64)->Arg(128);

static void BM_ComplexityGeneral(benchmark::State& state)
{
    EnsembleSpec spec = build_family(Family::PE, {.a = 3.0, .b = 3.0}, 64, 64);
    for (auto _ : state) benchmark::DoNotOptimize(complexity_from_spec(spec, 0.25).Y);
}
BENCHMARK(BM_ComplexityGeneral);

static void BM_InvertParameter(benchmark::State& state)
{
    for (auto _ : state)
        benchmark::DoNotOptimize(invert_to_parameter(Family::EE, 1e-2, 64, 64, 0.25).a);
}
BENCHMARK(BM_InvertParameter);

static void BM_KummerSeries(benchmark::State& state)
{
    double x = -static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(kummer_1f1(30.5, 0.5, x));
}
BENCHMARK(BM_KummerSeries)->Arg(1)->Arg(10)->Arg(40);

static void BM_KummerLargeOrder(benchmark::State& state)
{
    for (auto _ : state) benchmark::DoNotOptimize(kummer_1f1_large_order(200.0, 2.0));
}
BENCHMARK(BM_KummerLargeOrder);

static void BM_SdeSteps(benchmark::State& state)
{
    const int N = static_cast<int>(state.range(0));
    SdeParams p;
    // Repulsion grows like N^2; keep 1000 steps per iteration at every size.
    p.dY = 1e-5 * 64.0 / (N * N);
    Engine rng = make_stream(2, {});
    SchmidtSpectrum s = make_spectrum(std::vector<double>(static_cast<std::size_t>(N), 1.0), 0.5);
    for (auto _ : state) {
        auto t = sde_evolve(s, 0.0, 1000.0 * p.dY, p, rng);
        benchmark::DoNotOptimize(t.states.back().lambdas[0]);
    }
    state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_SdeSteps)->Arg(8)->Arg(32);
BENCHMARK_MAIN();
