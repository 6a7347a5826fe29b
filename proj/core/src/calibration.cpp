#include "qcal/calibration.hpp"

#include <cmath>

#include "qcal/errors.hpp"
#include "qcal/parallel.hpp"
#include "qcal/rng.hpp"
#include "qcal/stats.hpp"

namespace qcal {

double estimate_magnitude(long n_jp, double duration, double ez, double gamma_m) {
    if (!(duration > 0.0)) throw InvalidParameterError("estimate_magnitude: duration <= 0");
    if (n_jp < 0) throw InvalidParameterError("estimate_magnitude: negative count");
    if (!(gamma_m > 0.0)) throw InvalidParameterError("estimate_magnitude: gamma_m <= 0");
    if (n_jp == 0) return 0.0;
    return std::sqrt(static_cast<double>(n_jp) * (4.0 * ez * ez + gamma_m * gamma_m) /
                     (2.0 * gamma_m * duration));
}

double combine_estimates(double dv1, double dv2) {
    if (dv1 < 0.0 || dv2 < 0.0)
        throw InvalidParameterError("combine_estimates: magnitudes must be >= 0");
    if (dv1 >= dv2) return 0.5 * dv1 + dv2;
    return -0.5 * dv1 - dv2 / 3.0;
}

double statistical_uncertainty(double ez, double gamma_m, double duration) {
    if (!(duration > 0.0)) throw InvalidParameterError("statistical_uncertainty: duration <= 0");
    if (!(gamma_m > 0.0)) throw InvalidParameterError("statistical_uncertainty: gamma_m <= 0");
    return (4.0 * ez * ez + gamma_m * gamma_m) / (8.0 * gamma_m * duration);
}

double drift_variance(const NoiseSpec& spec, double duration, double alpha_sq) {
    spec.validate();
    if (duration < 0.0) throw InvalidParameterError("drift_variance: negative duration");
    if (!(alpha_sq > 0.0)) throw InvalidParameterError("drift_variance: alpha_sq <= 0");
    // sum_n (beta/omega_n) omega_n^2 T^2 <alpha^2><sin^2 phi>
    //   = alpha_sq (T^2/2) beta delta_omega N(N+1)/2
    const double n = static_cast<double>(spec.n_components);
    return 0.25 * alpha_sq * spec.beta * spec.delta_omega * n * (n + 1.0) * duration * duration;
}

bool drift_formula_valid(const NoiseSpec& spec, double duration) {
    return spec.band_width() * duration <= 0.3;
}

double optimal_time(double ez, double gamma_m, const NoiseSpec& spec, double alpha_sq) {
    const double a = (4.0 * ez * ez + gamma_m * gamma_m) / (8.0 * gamma_m);
    const double n = static_cast<double>(spec.n_components);
    const double c = 0.25 * alpha_sq * spec.beta * spec.delta_omega * n * (n + 1.0);
    if (!(a > 0.0) || !(c > 0.0)) throw InvalidParameterError("optimal_time: degenerate budget");
    return std::cbrt(a / (2.0 * c));
}

double dephasing_reduction_factor(double dv_c, double dv_end, double dv_start) {
    if (dv_start == 0.0)
        throw InvalidParameterError("dephasing_reduction_factor: dv_start = 0 is undefined");
    const double x = (dv_c - dv_end) / dv_start;
    return x * x * x * x;
}

CalibrationResult run_calibration(const CalibrationParams& params, const DetectorConfig& cfg,
                                  const NoiseSource& noise, std::uint64_t seed) {
    cfg.validate();
    if (params.n_p <= 0) throw InvalidParameterError("run_calibration: n_p must be positive");
    const double gamma_m = cfg.gamma_m();
    const double phase_t = 2.0 * static_cast<double>(params.n_p) / gamma_m;

    CalibrationResult result;
    result.phase_duration = phase_t;
    result.predicted_sigma = std::sqrt(statistical_uncertainty(params.ez, gamma_m, phase_t));

    std::uint64_t mix = seed;
    const std::uint64_t seed1 = splitmix64(mix);
    const std::uint64_t seed2 = splitmix64(mix);

    // phase 1: shift 0, from |0>
    TrajectoryParams phase1{params.ez, 0.0, params.mode};
    TrajectoryRecord rec1 = run_trajectory(DensityMatrix::pure0(), phase1, noise, cfg, phase_t,
                                           seed1, 0.0);
    apply_pipeline(rec1, cfg, params.hysteresis_fraction);
    result.n1 = count_switchings(rec1.bits, rec1.windowed).first;
    result.dv1 = estimate_magnitude(result.n1, phase_t, params.ez, gamma_m);
    result.windowed1 = std::move(rec1.windowed);
    result.bits1 = std::move(rec1.bits);

    // phase 2: same noise clock, phase-1 end state, shift -dv1/2
    TrajectoryParams phase2{params.ez, -0.5 * result.dv1, params.mode};
    TrajectoryRecord rec2 = run_trajectory(rec1.final_state, phase2, noise, cfg, phase_t, seed2,
                                           phase_t);
    apply_pipeline(rec2, cfg, params.hysteresis_fraction);
    result.n2 = count_switchings(rec2.bits, rec2.windowed).first;
    result.dv2 = estimate_magnitude(result.n2, phase_t, params.ez, gamma_m);
    result.windowed2 = std::move(rec2.windowed);
    result.bits2 = std::move(rec2.bits);
    result.final_state = rec2.final_state;

    result.dv_c = combine_estimates(result.dv1, result.dv2);
    result.true_dv_end = noise.value(2.0 * phase_t);
    result.residue = result.dv_c - result.true_dv_end;
    return result;
}

std::vector<SweepPoint> bandwidth_sweep(const SweepParams& params, const DetectorConfig& cfg,
                                        const std::vector<double>& bandwidths,
                                        std::uint64_t seed,
                                        std::vector<std::vector<double>>* residues_out) {
    if (params.repetitions < 20)
        throw InvalidParameterError("bandwidth_sweep: need >= 20 repetitions");
    if (bandwidths.empty()) throw InvalidParameterError("bandwidth_sweep: empty bandwidth list");
    for (double bw : bandwidths)
        if (!(bw > 0.0)) throw InvalidParameterError("bandwidth_sweep: band widths must be > 0");

    const std::size_t reps = static_cast<std::size_t>(params.repetitions);
    std::vector<std::vector<double>> residues(bandwidths.size(),
                                              std::vector<double>(reps, 0.0));
    const std::size_t total = bandwidths.size() * reps;
    parallel_for(total, params.jobs, [&](std::size_t idx) {
        const std::size_t bi = idx / reps;
        const std::size_t rep = idx % reps;
        NoiseSpec spec;
        spec.n_components = params.n_components;
        spec.delta_omega = bandwidths[bi] / static_cast<double>(params.n_components);
        spec.beta = beta_for_rms(params.rms, spec.delta_omega, spec.n_components);
        std::uint64_t mix = seed + 0x9e3779b97f4a7c15ULL * (idx + 1);
        const std::uint64_t noise_seed = splitmix64(mix);
        const std::uint64_t run_seed = splitmix64(mix);
        const NoiseModel model = sample_noise_model(spec, noise_seed);
        const CalibrationResult cal = run_calibration(params.calibration, cfg, model, run_seed);
        residues[bi][rep] = cal.residue;
    });

    std::vector<SweepPoint> out;
    out.reserve(bandwidths.size());
    for (std::size_t bi = 0; bi < bandwidths.size(); ++bi) {
        std::vector<double> sq(reps);
        for (std::size_t r = 0; r < reps; ++r) sq[r] = residues[bi][r] * residues[bi][r];
        SweepPoint p;
        p.band_width = bandwidths[bi];
        p.mean_sq_residue = mean(sq);
        p.stderr_msr = std::sqrt(variance(sq) / static_cast<double>(reps));
        p.repetitions = params.repetitions;
        out.push_back(p);
    }
    if (residues_out) *residues_out = std::move(residues);
    return out;
}

}  // namespace qcal
