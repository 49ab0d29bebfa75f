#include <benchmark/benchmark.h>

#include <cmath>

#include <axibouss/elliptic.hpp>
#include <axibouss/evolution.hpp>
#include <axibouss/flowmap.hpp>
#include <axibouss/initdata.hpp>
#include <axibouss/lpaley.hpp>

using namespace axibouss;

namespace {

MeridionalGrid grid_of(const benchmark::State& st) {
    const auto n = static_cast<std::size_t>(st.range(0)) + 1;
    return MeridionalGrid(n, n, 6.0, 6.0);
}

ScalarField2D ring(const MeridionalGrid& g) { return gaussian_vortex_ring({4.0, 1.5, 0.0, 0.4}, g); }

void BM_StreamSolve(benchmark::State& st) {
    const auto g = grid_of(st);
    const StreamSolver solver(g);
    const auto w = ring(g);
    for (auto _ : st) benchmark::DoNotOptimize(solver.velocity(w));
}
BENCHMARK(BM_StreamSolve)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_AdvectDensity(benchmark::State& st) {
    const auto g = grid_of(st);
    const auto v = StreamSolver(g).velocity(ring(g));
    const auto rho = annular_density({1.0, 1.0, 2.0, 0.0, 0.5}, g);
    const double dt = 0.5 * g.dr() / v.max_speed();
    for (auto _ : st) benchmark::DoNotOptimize(advect_density(rho, v, dt));
}
BENCHMARK(BM_AdvectDensity)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_CharacteristicMapStep(benchmark::State& st) {
    const auto g = grid_of(st);
    const auto v = StreamSolver(g).velocity(ring(g));
    const auto id = CharacteristicMap::identity(annular_density({1.0, 1.0, 2.0, 0.0, 0.5}, g));
    const double dt = 0.5 * g.dr() / v.max_speed();
    for (auto _ : st) benchmark::DoNotOptimize(advect_characteristics(id, v, v, dt));
}
BENCHMARK(BM_CharacteristicMapStep)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_ImexStep(benchmark::State& st) {
    const auto g = grid_of(st);
    Evolver ev(g, {});
    const auto s = make_state(ev.stream(), ring(g), annular_density({1.0, 1.0, 2.0, 0.0, 0.5}, g));
    const double dt = ev.stable_dt(s);
    for (auto _ : st) benchmark::DoNotOptimize(ev.step(s, dt));
}
BENCHMARK(BM_ImexStep)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_ParticleAdvance(benchmark::State& st) {
    const MeridionalGrid g(129, 129, 6.0, 6.0);
    const FrozenVelocity v(StreamSolver(g).velocity(ring(g)));
    std::vector<Particle> ps;
    for (int k = 0; k < st.range(0); ++k) ps.push_back({0.5 + 2.0 * k / st.range(0), 0.0, -1.0 + 0.01 * k, false});
    for (auto _ : st) benchmark::DoNotOptimize(advance_particles(ps, v, 0.0, 0.1, 0.01));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_ParticleAdvance)->Arg(16)->Arg(256);

void BM_DyadicBlocks(benchmark::State& st) {
    const auto n = static_cast<std::size_t>(st.range(0));
    const MeridionalGrid g(129, 129, 3.0, 3.0);
    const auto u = embed_cartesian(gaussian_vortex_ring({1.0, 1.5, 0.0, 0.4}, g), n);
    const DyadicTransform t(n);
    for (auto _ : st) benchmark::DoNotOptimize(t.blocks(u));
}
BENCHMARK(BM_DyadicBlocks)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

} // namespace
BENCHMARK_MAIN();
