// ============================================================================
// Microbenchmarks for the hot paths: flux kernels, the CFL scan, whole mesh
// sweeps of step(), and the semi-analytic Riemann solver.
// ============================================================================

#include <benchmark/benchmark.h>

#include "stepflow/exact.hpp"
#include "stepflow/fluxes.hpp"
#include "stepflow/registry.hpp"
#include "stepflow/scheme.hpp"

namespace sf = stepflow;

namespace {

constexpr double kG = 9.81;

const sf::ConservedState kLeft{0.9458, 0.1629};
const sf::ConservedState kRight{0.1964, 0.1629};

void bm_lxf_flux(benchmark::State& state) {
    const sf::ViscosityMatrix a{3.3, 3.3};
    for (auto _ : state) {
        benchmark::DoNotOptimize(sf::lxf_flux(kLeft, kRight, a, kG));
    }
}
BENCHMARK(bm_lxf_flux);

void bm_hllc_flux(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(sf::hllc_flux(kLeft, kRight, kG));
    }
}
BENCHMARK(bm_hllc_flux);

void bm_interface_source(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(sf::interface_source(
            kLeft.h, kRight.h, 0.0, 0.7, sf::GammaChoice::sign_of_jump, kG));
    }
}
BENCHMARK(bm_interface_source);

sf::SimulationState make_dam_break_state(int cells) {
    const sf::ExperimentConfig& e = sf::find_experiment("dam-break");
    const sf::Mesh mesh = sf::make_mesh(e, cells);
    const sf::Topography topo = sf::make_topography(e);
    return sf::init_riemann(mesh, topo, e.left, e.right, e.g);
}

void bm_cfl_dt(benchmark::State& state) {
    const sf::SimulationState s = make_dam_break_state(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(sf::cfl_dt(s, kG, 0.5));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_cfl_dt)->Arg(800)->Arg(3200);

void bm_step(benchmark::State& state) {
    sf::SimulationState s = make_dam_break_state(static_cast<int>(state.range(0)));
    const sf::SchemeSpec spec = sf::scheme_preset(state.range(1) == 0 ? "lxf" : "clxf");
    const double dt = sf::cfl_dt(s, kG, 0.5);
    std::vector<sf::InterfaceTerms> workspace;
    for (auto _ : state) {
        sf::step(s, spec, kG, dt, &workspace);
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_step)->Args({800, 0})->Args({3200, 0})->Args({800, 1})->Args({3200, 1});

void bm_riemann_solver(benchmark::State& state) {
    const sf::ExperimentConfig& e = sf::find_experiment("dam-break");
    const sf::WavePatternHint hint = sf::WavePatternHint::parse(e.pattern);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sf::solve_riemann_grh(
            e.left, e.right, 0.0, e.bed_right, sf::GammaChoice::sign_of_jump, e.g, hint));
    }
}
BENCHMARK(bm_riemann_solver);

}  // namespace

BENCHMARK_MAIN();
