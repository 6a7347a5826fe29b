#include "qcal/detector.hpp"

#include <cmath>

#include "qcal/errors.hpp"

namespace qcal {

void DetectorConfig::validate() const {
    if (!std::isfinite(i0) || !std::isfinite(i1) || !std::isfinite(s_i) || !std::isfinite(dt))
        throw ConfigurationError("DetectorConfig: non-finite field");
    if (delta_i() <= 0.0) throw ConfigurationError("DetectorConfig: need distinct levels i0 != i1");
    if (!(s_i > 0.0)) throw ConfigurationError("DetectorConfig: s_i must be positive");
    if (!(dt > 0.0)) throw ConfigurationError("DetectorConfig: dt must be positive");
    if (dt * gamma_m() > 0.01)
        throw ConfigurationError("DetectorConfig: dt * gamma_m = " + std::to_string(dt * gamma_m()) +
                                 " violates dt << 1/gamma_m (limit 0.01)");
}

std::vector<std::string> DetectorConfig::warnings(double ez, double dv_scale) const {
    std::vector<std::string> out;
    if (!(delta_i() < 0.2 * std::abs(midpoint())))
        out.push_back("weak-measurement regime: delta_i is not small against (i0+i1)/2");
    const double level_scale = std::sqrt(ez * ez + dv_scale * dv_scale);
    if (!(gamma_m() < 0.2 * level_scale))
        out.push_back("weak-measurement regime: gamma_m is not small against sqrt(ez^2 + dV^2)");
    return out;
}

double sample_current(const DensityMatrix& rho, const DetectorConfig& cfg, Rng& rng) {
    return cfg.i0 * rho.rho00 + cfg.i1 * rho.rho11() + cfg.sample_sigma() * rng.normal();
}

DensityMatrix bayesian_update(const DensityMatrix& rho, double i_obs, const DetectorConfig& cfg) {
    const double p = rho.rho00;
    if (p <= 0.0 || p >= 1.0) return rho;  // eigenstates are fixed points
    // likelihood ratio L1/L0 collapses to a single exponential
    const double r =
        std::exp((cfg.i1 - cfg.i0) * (2.0 * i_obs - cfg.i0 - cfg.i1) * cfg.dt / cfg.s_i);
    if (!std::isfinite(r)) throw NumericalRangeError("bayesian_update: likelihood overflow");
    const double denom = p + (1.0 - p) * r;
    // rho01' = rho01 sqrt(rho00' rho11'/(rho00 rho11)) = rho01 sqrt(r)/denom
    return {p / denom, rho.rho01 * (std::sqrt(r) / denom)};
}

double step_trajectory(TrajectoryState& state, const QubitHamiltonian& h,
                       const DetectorConfig& cfg) {
    const double i_obs = sample_current(state.rho, cfg, state.rng);
    state.rho = bayesian_update(state.rho, i_obs, cfg);
    state.rho = evolve_unitary(state.rho, h, cfg.dt);
    state.t += cfg.dt;
    return i_obs;
}

TrajectoryRecord run_trajectory(const DensityMatrix& rho0, const TrajectoryParams& params,
                                const NoiseSource& noise, const DetectorConfig& cfg,
                                double duration, std::uint64_t seed, double t_start,
                                StateLogSpec log) {
    cfg.validate();
    if (duration < 0.0) throw InvalidParameterError("run_trajectory: negative duration");

    TrajectoryRecord record;
    record.dt = cfg.dt;
    record.t0 = t_start;
    record.final_state = rho0;
    const auto n_steps = static_cast<std::size_t>(std::llround(duration / cfg.dt));
    record.raw.reserve(n_steps);

    TrajectoryState state{rho0, t_start, Rng(seed, 0x74726a6bULL)};
    auto dv = noise.stepper(t_start, cfg.dt);

    // hot loop: inline the step so the Hamiltonian rebuild stays in registers
    const double dt = cfg.dt;
    const double sigma = cfg.sample_sigma();
    const double like_scale = (cfg.i1 - cfg.i0) * dt / cfg.s_i;
    const double mid_sum = cfg.i0 + cfg.i1;
    const double ez = params.ez;
    const bool euler = params.mode == StepMode::euler;

    double p = rho0.rho00;
    cplx q = rho0.rho01;
    for (std::size_t k = 0; k < n_steps; ++k) {
        const double v = dv->value() + params.shift;
        // pre-measurement state at t_k goes to the log
        if (log.stride != 0 && k % log.stride == 0) {
            record.state_log.push_back(
                {t_start + static_cast<double>(k) * dt, p, q.real(), q.imag(), dv->value()});
        }
        // measure
        const double i_mean = cfg.i0 * p + cfg.i1 * (1.0 - p);
        const double i_obs = i_mean + sigma * state.rng.normal();
        record.raw.push_back(i_obs);
        // Bayes
        if (p > 0.0 && p < 1.0) {
            const double r = std::exp(like_scale * (2.0 * i_obs - mid_sum));
            const double denom = p + (1.0 - p) * r;
            q *= std::sqrt(r) / denom;
            p /= denom;
        }
        // Hamiltonian step
        const QubitHamiltonian h{ez, v};
        DensityMatrix rho{p, q};
        rho = euler ? evolve_euler(rho, h, dt) : evolve_unitary(rho, h, dt);
        p = rho.rho00;
        q = rho.rho01;
        dv->advance();
    }
    record.final_state = {p, q};
    return record;
}

}  // namespace qcal
