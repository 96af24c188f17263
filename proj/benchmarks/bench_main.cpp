#include <benchmark/benchmark.h>

#include "gupqm/analytic_kernels.hpp"
#include "gupqm/classical.hpp"
#include "gupqm/numeric_propagator.hpp"
#include "gupqm/perturbation.hpp"

using namespace gupqm;

namespace {

void BM_BuildHamiltonian(benchmark::State& state) {
    const auto grid = SpatialGrid::centered(20.0, static_cast<std::size_t>(state.range(0)));
    const auto p = PhysicalParams::natural(1e-2, 1.0);
    const auto pot = PotentialSpec::harmonic(1.0);
    for (auto _ : state) benchmark::DoNotOptimize(build_hamiltonian(p, grid, pot).matrix().data());
}
BENCHMARK(BM_BuildHamiltonian)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_Diagonalize(benchmark::State& state) {
    const auto grid = SpatialGrid::centered(20.0, static_cast<std::size_t>(state.range(0)));
    const auto p = PhysicalParams::natural(1e-2, 1.0);
    const auto pot = PotentialSpec::harmonic(1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ground_state_energy_numeric(p, grid, pot, SpectrumMethod::Diagonalization).energy);
    }
}
BENCHMARK(BM_Diagonalize)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_ImaginaryTime(benchmark::State& state) {
    const auto grid = SpatialGrid::centered(20.0, static_cast<std::size_t>(state.range(0)));
    const auto p = PhysicalParams::natural(1e-2, 1.0);
    const auto pot = PotentialSpec::harmonic(1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ground_state_energy_numeric(p, grid, pot, SpectrumMethod::ImaginaryTime).energy);
    }
}
BENCHMARK(BM_ImaginaryTime)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_ComposeMomentumSplit(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto grid = SpatialGrid::centered(0.15625 * static_cast<double>(n), n);
    const auto p = PhysicalParams::natural(1e-3);
    const auto slicing = TimeSlicing::create(1.0, static_cast<std::size_t>(state.range(1)), SliceScheme::MomentumSplit);
    for (auto _ : state) {
        benchmark::DoNotOptimize(compose_kernel(p, grid, slicing, PotentialSpec::free()).entries().data());
    }
}
BENCHMARK(BM_ComposeMomentumSplit)->Args({256, 64})->Args({512, 256})->Unit(benchmark::kMillisecond);

void BM_ComposeShortTime(benchmark::State& state) {
    const auto grid = SpatialGrid::centered(20.0, 512);
    const auto p = PhysicalParams::natural(0.0, 1.0);
    const auto slicing = TimeSlicing::create(1.0, static_cast<std::size_t>(state.range(0)), SliceScheme::ShortTimeKernel);
    for (auto _ : state) {
        benchmark::DoNotOptimize(compose_kernel(p, grid, slicing, PotentialSpec::harmonic(1.0)).entries().data());
    }
}
BENCHMARK(BM_ComposeShortTime)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_P4MatrixElement(benchmark::State& state) {
    const auto p = PhysicalParams::natural(1e-2, 1.0);
    const auto basis = OscillatorBasis::create(static_cast<std::size_t>(state.range(0)), p);
    for (auto _ : state) benchmark::DoNotOptimize(p4_matrix_element(basis, 0, 0));
}
BENCHMARK(BM_P4MatrixElement)->Arg(32)->Arg(128);

void BM_HoActionQuadrature(benchmark::State& state) {
    const auto p = PhysicalParams::natural(0.0, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(ho_action_beta1_quadrature(p, 0.0, 1.0, 1.0).value);
}
BENCHMARK(BM_HoActionQuadrature)->Unit(benchmark::kMicrosecond);

void BM_FreeKernelGup(benchmark::State& state) {
    const auto p = PhysicalParams::natural(1e-3);
    double q = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(free_kernel_gup(p, 0.0, q, 1.0));
        q += 1e-6;
    }
}
BENCHMARK(BM_FreeKernelGup);

}  // namespace
BENCHMARK_MAIN();
