#include "aggdiff/initial_condition.hpp"
#include "aggdiff/kernel.hpp"
#include "aggdiff/solver.hpp"

#include <benchmark/benchmark.h>

using namespace aggdiff;

namespace {

Field bump(std::size_t n) {
    return InitialCondition{}.sample(Grid(2.0, n));
}

void BM_conv_k_sweep(benchmark::State& state) {
    const Field u = bump(static_cast<std::size_t>(state.range(0)));
    const KernelSpec k = KernelSpec::exponential(u.grid());
    for (auto _ : state) {
        benchmark::DoNotOptimize(conv_k(u, k));
    }
    state.SetComplexityN(state.range(0));
}

void BM_conv_k_direct(benchmark::State& state) {
    const Field u = bump(static_cast<std::size_t>(state.range(0)));
    const KernelSpec k = KernelSpec::exponential(u.grid());
    for (auto _ : state) {
        benchmark::DoNotOptimize(conv_k_direct(u, k));
    }
    state.SetComplexityN(state.range(0));
}

void BM_convolve_both(benchmark::State& state) {
    const Field u = bump(static_cast<std::size_t>(state.range(0)));
    const KernelSpec k = KernelSpec::exponential(u.grid());
    for (auto _ : state) {
        benchmark::DoNotOptimize(convolve(u, k));
    }
}

void BM_rhs(benchmark::State& state) {
    SolverConfig cfg{Grid(2.0, static_cast<std::size_t>(state.range(0)))};
    const Field u = InitialCondition{}.sample(cfg.grid);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rhs(u, cfg));
    }
}

void BM_step(benchmark::State& state) {
    SolverConfig cfg{Grid(2.0, static_cast<std::size_t>(state.range(0)))};
    cfg.t_end = 1e9;
    const SolverState s0{InitialCondition{}.sample(cfg.grid)};
    for (auto _ : state) {
        benchmark::DoNotOptimize(step(s0, cfg));
    }
}

} // namespace

BENCHMARK(BM_conv_k_sweep)->RangeMultiplier(4)->Range(64, 16384)->Complexity(benchmark::oN);
BENCHMARK(BM_conv_k_direct)->RangeMultiplier(4)->Range(64, 4096)->Complexity(benchmark::oNSquared);
BENCHMARK(BM_convolve_both)->Arg(513)->Arg(4097);
BENCHMARK(BM_rhs)->Arg(257)->Arg(513)->Arg(1025);
BENCHMARK(BM_step)->Arg(257)->Arg(513)->Arg(1025);

BENCHMARK_MAIN();
