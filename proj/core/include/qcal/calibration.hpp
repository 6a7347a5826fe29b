#pragma once

#include <cstdint>
#include <vector>

#include "qcal/detector.hpp"
#include "qcal/noise.hpp"
#include "qcal/record.hpp"

namespace qcal {

struct CalibrationResult {
    double dv1 = 0.0;  // phase-1 magnitude estimate, >= 0
    double dv2 = 0.0;  // phase-2 estimate after the -dv1/2 shift, >= 0
    double dv_c = 0.0;  // signed combined estimate
    long n1 = 0;
    long n2 = 0;
    double phase_duration = 0.0;
    double predicted_sigma = 0.0;  // sqrt of the Eq.-style statistical variance
    double true_dv_end = 0.0;  // dV at the end of phase 2 (simulation truth)
    double residue = 0.0;      // dv_c - true_dv_end
    // windowed/bit series of both phases, kept for figure export
    std::vector<WindowSample> windowed1, windowed2;
    std::vector<std::uint8_t> bits1, bits2;
    DensityMatrix final_state;
};

// Inversion of n = T / tau_jp with tau_jp^{-1} = 2 dV^2 gamma_m/(4 ez^2 +
// gamma_m^2): dV_hat = sqrt(n (4 ez^2 + gamma_m^2) / (2 gamma_m T)).
// n = 0 maps to 0; no small-count bias correction.
double estimate_magnitude(long n_jp, double duration, double ez, double gamma_m);

// Piecewise combination: dv1/2 + dv2 when dv1 > dv2 (positive branch, the
// tie resolves here because this branch is continuous at the noiseless
// boundary dv2 = dv1/2 < dv1), else -(dv1/2) - dv2/3.
double combine_estimates(double dv1, double dv2);

// Statistical variance of one phase estimate: (4 ez^2 + gamma_m^2)/(8
// gamma_m T).
double statistical_uncertainty(double ez, double gamma_m, double duration);

// Small-T drift variance of the cosine-sum noise:
// <(dV(T) - dV(0))^2> = alpha_sq * (beta delta_omega / 4) N(N+1) T^2.
// alpha_sq = 1 matches the unit-variance sampling this library uses;
// alpha_sq = 1/3 reproduces the (beta/12 delta_omega) B_w^2 T^2 continuum
// form. Valid for band_width * T << 1 (see drift_formula_valid).
double drift_variance(const NoiseSpec& spec, double duration, double alpha_sq);

bool drift_formula_valid(const NoiseSpec& spec, double duration);

// argmin_T [statistical_uncertainty(T) + drift_variance(T)] = (A/2C)^{1/3}
// with A the statistical coefficient and C the drift coefficient.
double optimal_time(double ez, double gamma_m, const NoiseSpec& spec, double alpha_sq = 1.0);

// |(dv_c - dv_end)/dv_start|^4; dv_start = 0 throws InvalidParameterError.
double dephasing_reduction_factor(double dv_c, double dv_end, double dv_start);

struct CalibrationParams {
    double ez = 0.0;
    long n_p = 2000;
    double hysteresis_fraction = 0.33;
    StepMode mode = StepMode::exact;
};

// Two phases of 2 n_p / gamma_m each. Phase 1 from |0> with shift 0; phase
// 2 continues the same noise clock and the phase-1 end state with shift
// -dv1/2. Pipeline counts feed estimate_magnitude; combine_estimates gives
// dv_c.
CalibrationResult run_calibration(const CalibrationParams& params, const DetectorConfig& cfg,
                                  const NoiseSource& noise, std::uint64_t seed);

struct SweepPoint {
    double band_width = 0.0;
    double mean_sq_residue = 0.0;
    double stderr_msr = 0.0;
    int repetitions = 0;
};

struct SweepParams {
    CalibrationParams calibration;
    double rms = 0.8;       // target RMS of dV; beta is re-derived per band width
    int n_components = 20;  // components per realization; delta_omega = B_w / N
    int repetitions = 20;
    unsigned jobs = 1;
};

// Fresh noise realizations per repetition at every band width; residues are
// taken against the true dV at calibration end.
std::vector<SweepPoint> bandwidth_sweep(const SweepParams& params, const DetectorConfig& cfg,
                                        const std::vector<double>& bandwidths,
                                        std::uint64_t seed,
                                        std::vector<std::vector<double>>* residues_out = nullptr);

}  // namespace qcal
