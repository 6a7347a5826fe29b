#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qcal/noise.hpp"
#include "qcal/qubit.hpp"
#include "qcal/record.hpp"
#include "qcal/rng.hpp"

namespace qcal {

// Detector readout model: current levels i0/i1, white-noise spectral
// density s_i, sampling interval dt.
struct DetectorConfig {
    double i0 = 0.0;
    double i1 = 0.0;
    double s_i = 0.0;
    double dt = 0.0;

    double delta_i() const { return i1 > i0 ? i1 - i0 : i0 - i1; }
    double midpoint() const { return 0.5 * (i0 + i1); }
    double gamma_m() const { return delta_i() * delta_i() / (4.0 * s_i); }
    // std of one current sample: <xi^2> = S_I/(2 dt)
    double sample_sigma() const { return std::sqrt(s_i / (2.0 * dt)); }

    // Hard invariants: distinct levels, s_i > 0, dt > 0, dt*gamma_m <= 0.01.
    // Throws ConfigurationError.
    void validate() const;

    // Soft weak-measurement regime checks; returned, not thrown.
    std::vector<std::string> warnings(double ez, double dv_scale) const;
};

// I = i0 rho00 + i1 rho11 + xi, xi ~ N(0, sqrt(S_I/2dt)).
double sample_current(const DensityMatrix& rho, const DetectorConfig& cfg, Rng& rng);

// Likelihood reweighting by exp(-(I - i_k)^2 dt / S_I) plus the coherence
// factor sqrt(rho00' rho11' / rho00 rho11); fixed points rho00 in {0, 1}
// pass through unchanged.
DensityMatrix bayesian_update(const DensityMatrix& rho, double i_obs, const DetectorConfig& cfg);

struct TrajectoryParams {
    double ez = 0.0;
    double shift = 0.0;  // control offset added to the noise (calibration)
    StepMode mode = StepMode::exact;
};

struct TrajectoryState {
    DensityMatrix rho;
    double t = 0.0;
    Rng rng;
};

// One record step: sample the current from the present state, Bayes-update
// on that sample, then the Hamiltonian step; t advances by dt. Returns the
// recorded current.
double step_trajectory(TrajectoryState& state, const QubitHamiltonian& h,
                       const DetectorConfig& cfg);

struct StateLogSpec {
    std::size_t stride = 0;  // 0 disables the log
};

// Full selective run over [t_start, t_start + duration): the Hamiltonian is
// rebuilt every step with off_diag = dV(t) + shift, t on the step grid.
// Fixed seed gives a bit-identical record.
TrajectoryRecord run_trajectory(const DensityMatrix& rho0, const TrajectoryParams& params,
                                const NoiseSource& noise, const DetectorConfig& cfg,
                                double duration, std::uint64_t seed,
                                double t_start = 0.0, StateLogSpec log = {});

}  // namespace qcal
