// Serial versus OpenMP response-tensor construction and oracle restarts.
#include "slp/localenergy.hpp"
#include "slp/models.hpp"
#include "slp/response.hpp"

#include <benchmark/benchmark.h>

namespace {

void BM_EigenResponseSerial(benchmark::State& state) {
    const auto m = slp::build_chain(static_cast<int>(state.range(0)), 2.0);
    for (auto _ : state) benchmark::DoNotOptimize(slp::eigen_response_serial(m.hamiltonian, m.dims));
}

void BM_EigenResponseParallel(benchmark::State& state) {
    const auto m = slp::build_chain(static_cast<int>(state.range(0)), 2.0);
    for (auto _ : state) benchmark::DoNotOptimize(slp::eigen_response(m.hamiltonian, m.dims));
}

void BM_OracleGibbsPair(benchmark::State& state) {
    const auto m = slp::build_pair(2.0, 1.0);
    const auto rho = slp::density(m, slp::gibbs(m, slp::Temperature::finite(0.5)));
    slp::OracleOptions opts;
    opts.restarts = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(slp::oracle_maximize(m, rho, opts).best);
}

}  // namespace

BENCHMARK(BM_EigenResponseSerial)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EigenResponseParallel)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OracleGibbsPair)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
