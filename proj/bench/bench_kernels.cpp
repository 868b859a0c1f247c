#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "weakoam/kernels.hpp"
#include "weakoam/pointer.hpp"

using namespace weakoam;

namespace {

std::vector<cplx> field(const GridSpec &g) {
    std::vector<cplx> v(g.size());
    kernels::parallel::sample_mode(PointerSpec::with_winding(1), g, 0.0, 0.0, v);
    return v;
}

template <bool Parallel>
void BM_Sample(benchmark::State &state) {
    const GridSpec g = GridSpec::make(static_cast<int>(state.range(0)), 8.0);
    std::vector<cplx> out(g.size());
    for (auto _ : state) {
        if constexpr (Parallel) {
            kernels::parallel::sample_mode(PointerSpec::with_winding(1), g, 0.01, 0.0, out);
        } else {
            kernels::reference::sample_mode(PointerSpec::with_winding(1), g, 0.01, 0.0, out);
        }
        benchmark::DoNotOptimize(out.data());
    }
}

template <bool Parallel>
void BM_Moment(benchmark::State &state) {
    const GridSpec g = GridSpec::make(static_cast<int>(state.range(0)), 8.0);
    const auto v = field(g);
    for (auto _ : state) {
        cplx m = Parallel ? kernels::parallel::moment(g, v, v, 1, 1) : kernels::reference::moment(g, v, v, 1, 1);
        benchmark::DoNotOptimize(m);
    }
}

template <bool Parallel>
void BM_Momentum(benchmark::State &state) {
    const GridSpec g = GridSpec::make(static_cast<int>(state.range(0)), 8.0);
    const auto v = field(g);
    std::vector<cplx> out(g.size());
    for (auto _ : state) {
        if constexpr (Parallel) {
            kernels::parallel::momentum(g, kernels::Axis::X, v, out);
        } else {
            kernels::reference::momentum(g, kernels::Axis::X, v, out);
        }
        benchmark::DoNotOptimize(out.data());
    }
}

}  // namespace

BENCHMARK(BM_Sample<false>)->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(BM_Sample<true>)->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(BM_Moment<false>)->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(BM_Moment<true>)->Arg(128)->Arg(256)->Arg(512);
// the dense reference derivative is O(n^3); keep it small
BENCHMARK(BM_Momentum<false>)->Arg(64)->Arg(128);
BENCHMARK(BM_Momentum<true>)->Arg(64)->Arg(128)->Arg(256)->Arg(512);

BENCHMARK_MAIN();
