#include <benchmark/benchmark.h>

#include <random>

#include "qrac/cmatrix.hpp"
#include "qrac/mub.hpp"
#include "qrac/oiscan.hpp"
#include "qrac/perturb.hpp"
#include "qrac/qrac.hpp"

using namespace qrac;

static void BM_GaloisMubs(benchmark::State& state) {
    const auto d = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(galois_mubs(d));
}
BENCHMARK(BM_GaloisMubs)->Arg(5)->Arg(16)->Arg(31)->Unit(benchmark::kMillisecond);

static void BM_Eigh(benchmark::State& state) {
    const auto d = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    CMatrix a(d);
    for (auto& z : a.data()) z = cplx(g(rng), g(rng));
    const CMatrix h = a + a.adjoint();
    for (auto _ : state) benchmark::DoNotOptimize(eigh(h));
}
BENCHMARK(BM_Eigh)->Arg(3)->Arg(9)->Arg(17)->Arg(32);

static void BM_TripletAnalytic(benchmark::State& state) {
    const auto set = galois_mubs(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(p3_analytic(set[0], set[1], set[2]));
}
BENCHMARK(BM_TripletAnalytic)->Arg(5)->Arg(17)->Arg(31);

static void BM_TripletGeneral(benchmark::State& state) {
    const auto set = galois_mubs(static_cast<std::size_t>(state.range(0)));
    const Basis* trio[3] = {&set[0], &set[1], &set[2]};
    const auto w = RequestWeights::uniform(3);
    for (auto _ : state) benchmark::DoNotOptimize(p_general(trio, w, {false, 1}));
}
BENCHMARK(BM_TripletGeneral)->Arg(5)->Arg(9)->Arg(17);

static void BM_Scan(benchmark::State& state) {
    const auto set = galois_mubs(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(scan(set));
}
BENCHMARK(BM_Scan)->Arg(5)->Arg(13)->Arg(31)->Unit(benchmark::kMillisecond);

static void BM_PerturbSet(benchmark::State& state) {
    const auto set = galois_mubs(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(perturb_set(set, 0.14));
}
BENCHMARK(BM_PerturbSet)->Arg(9)->Arg(17)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
