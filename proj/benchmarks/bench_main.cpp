#include <benchmark/benchmark.h>

#include "nhbl/btp.hpp"
#include "nhbl/dispersion.hpp"
#include "nhbl/phase.hpp"
#include "nhbl/realspace.hpp"
#include "nhbl/winding.hpp"

using namespace nhbl;

namespace {

const ModelParams kIV = make_params(1.0, -1.5, 0.5, 0.5);

void BM_LocateBtps(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(locate_btps(kIV));
    }
}
BENCHMARK(BM_LocateBtps);

void BM_WindingF(benchmark::State& state) {
    const Loop loop{{kPi / 3, -kPi / 2}, 0.1, static_cast<int>(state.range(0))};
    for (auto _ : state) {
        benchmark::DoNotOptimize(winding_number(kIV, loop, FieldKind::F));
    }
}
BENCHMARK(BM_WindingF)->Arg(512)->Arg(2048);

void BM_WindingE(benchmark::State& state) {
    const Loop loop{{kPi / 3, -kPi / 2}, 0.1, 512};
    for (auto _ : state) {
        benchmark::DoNotOptimize(winding_number(kIV, loop, FieldKind::E));
    }
}
BENCHMARK(BM_WindingE);

void BM_Signature(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(signature(kIV));
    }
}
BENCHMARK(BM_Signature);

void BM_Scan(benchmark::State& state) {
    const int res = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(scan_phase_diagram({-2.0, 2.0}, {-2.0, 2.0}, res, kIV, 1));
    }
    state.SetItemsProcessed(state.iterations() * res * res);
}
BENCHMARK(BM_Scan)->Arg(11)->Unit(benchmark::kMillisecond);

void BM_DispersionRay(benchmark::State& state) {
    const Btp b = characterize_btps(kIV).front();
    const auto q = default_offsets();
    for (auto _ : state) {
        benchmark::DoNotOptimize(analyze_ray(kIV, b, {0.6, 0.8}, q));
    }
}
BENCHMARK(BM_DispersionRay);

void BM_RealspaceCheck(benchmark::State& state) {
    const LatticeSize size(static_cast<int>(state.range(0)));
    const ComplexMatrix U = build_momentum_basis(size);
    for (auto _ : state) {
        benchmark::DoNotOptimize(block_check(build_realspace(kIV, size), U, kIV));
    }
}
BENCHMARK(BM_RealspaceCheck)->Arg(6)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
