// Microbenchmarks for the hot paths: direction extraction, orbit
// contraction, curve evolution, hierarchy construction, itineraries,
// and the orbit-selection checks.

#include <benchmark/benchmark.h>

#include "af/contraction.hpp"
#include "af/critical.hpp"
#include "af/curves.hpp"
#include "af/map_core.hpp"
#include "af/symbolic.hpp"

namespace {

void bm_most_contracted(benchmark::State& state) {
    const af::Mat2 M{1.8, 0.4, 0.1, 0.3};
    for (auto _ : state) benchmark::DoNotOptimize(af::most_contracted(M));
}
BENCHMARK(bm_most_contracted);

void bm_orbit_contraction(benchmark::State& state) {
    const af::MapFamily m = af::henon_family(1.9, 1e-4);
    af::Vec2 z{0.3, 0.0};
    for (int i = 0; i < 400; ++i) z = m.eval(z);
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(af::e_n_along_orbit(m, z, n));
}
BENCHMARK(bm_orbit_contraction)->Arg(10)->Arg(20);

void bm_evolve_curve(benchmark::State& state) {
    const af::MapFamily m = af::henon_family(1.9, 1e-3);
    const af::SampledCurve seg = af::make_segment({0.29, 0.0}, {0.31, 0.0}, 101);
    const auto steps = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(af::evolve_curve(m, seg, steps));
}
BENCHMARK(bm_evolve_curve)->Arg(2)->Arg(4);

void bm_build_hierarchy(benchmark::State& state) {
    const af::MapFamily m = af::henon_family(2.0, 1e-6);
    const af::SystemConfig cfg{};
    for (auto _ : state) benchmark::DoNotOptimize(af::build_hierarchy(m, cfg));
}
BENCHMARK(bm_build_hierarchy);

void bm_itinerary(benchmark::State& state) {
    const af::MapFamily m = af::henon_family(2.0, 1e-6);
    for (auto _ : state)
        benchmark::DoNotOptimize(af::itinerary(m, {0.31, 1e-7}, 64));
}
BENCHMARK(bm_itinerary);

void bm_ia_checks(benchmark::State& state) {
    const af::MapFamily m = af::henon_family(2.0, 0.0);
    const af::SystemConfig cfg{};
    const af::Hierarchy h = af::build_hierarchy(m, cfg);
    for (auto _ : state)
        benchmark::DoNotOptimize(af::ia_checks(m, h, {0.0, 0.0}, 30, cfg));
}
BENCHMARK(bm_ia_checks);

} // namespace

BENCHMARK_MAIN();
