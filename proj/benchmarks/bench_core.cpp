#include <benchmark/benchmark.h>

#include "qcal/detector.hpp"
#include "qcal/master.hpp"
#include "qcal/noise.hpp"
#include "qcal/qubit.hpp"
#include "qcal/record.hpp"
#include "qcal/rng.hpp"

namespace {

using namespace qcal;

const DetectorConfig kDet{10.0, 10.4, 0.4, 0.05};

// Innermost measurement loop: sample current, Bayes update, unitary step.
void BM_StepTrajectory(benchmark::State& state) {
    TrajectoryState ts{DensityMatrix::pure0(), 0.0, Rng(1, 1)};
    const QubitHamiltonian h = make_hamiltonian(7.0, 0.3, 0.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(step_trajectory(ts, h, kDet));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_StepTrajectory);

// Incremental rotor evaluation of the cosine sum, per component count.
void BM_NoiseStepper(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const NoiseSpec spec{beta_for_rms(0.8, 1e-6, n), 1e-6, n};
    const NoiseModel model = sample_noise_model(spec, 42);
    auto st = model.stepper(0.0, 0.05);
    for (auto _ : state) {
        st->advance();
        benchmark::DoNotOptimize(st->value());
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_NoiseStepper)->Arg(20)->Arg(200);

// Direct trig evaluation at arbitrary t, the path the stepper replaces.
void BM_NoiseDirect(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const NoiseSpec spec{beta_for_rms(0.8, 1e-6, n), 1e-6, n};
    const NoiseModel model = sample_noise_model(spec, 42);
    double t = 0.0;
    for (auto _ : state) {
        t += 0.05;
        benchmark::DoNotOptimize(model.value(t));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_NoiseDirect)->Arg(20)->Arg(200);

// Window averaging + hysteresis binarization + switching count over a
// record of state.range(0) raw samples.
void BM_WindowPipeline(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    TrajectoryRecord rec;
    rec.dt = kDet.dt;
    rec.t0 = 0.0;
    rec.raw.reserve(n);
    Rng rng(7, 7);
    for (std::size_t k = 0; k < n; ++k)
        rec.raw.push_back(kDet.midpoint() + 0.3 * rng.normal());
    for (auto _ : state) {
        apply_pipeline(rec, kDet, 0.33);
        benchmark::DoNotOptimize(rec.switch_times.size());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}
BENCHMARK(BM_WindowPipeline)->Arg(80000);

// Fixed-dV ensemble integrator, 10 time units per iteration.
void BM_MasterRk4(benchmark::State& state) {
    const DensityMatrix rho0 = DensityMatrix::pure0();
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            integrate_master(rho0, 7.0, 0.82, 0.1, 10.0, 0.005, 100));
    }
    state.SetItemsProcessed(state.iterations() * 2000);
}
BENCHMARK(BM_MasterRk4);

// Whole selective run, 100 time units of 1/f-driven record.
void BM_RunTrajectory(benchmark::State& state) {
    const NoiseSpec spec{beta_for_rms(0.8, 1e-6, 20), 1e-6, 20};
    const NoiseModel model = sample_noise_model(spec, 42);
    const TrajectoryParams params{7.0, 0.0, StepMode::exact};
    const DensityMatrix rho0 = DensityMatrix::pure0();
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            run_trajectory(rho0, params, model, kDet, 100.0, ++seed));
    }
    state.SetItemsProcessed(state.iterations() * 2000);
}
BENCHMARK(BM_RunTrajectory);

}  // namespace

BENCHMARK_MAIN();
