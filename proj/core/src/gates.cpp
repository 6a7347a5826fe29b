#include "qcal/gates.hpp"

#include <cmath>
#include <memory>

#include "qcal/errors.hpp"
#include "qcal/parallel.hpp"
#include "qcal/qubit.hpp"
#include "qcal/stats.hpp"

namespace qcal {

namespace {

constexpr double kPi = 3.14159265358979323846;

Mat2 segment_unitary(double ez, double off_diag, double duration) {
    return hamiltonian_exponential({ez, off_diag}, duration);
}

// Time-shifted view of a base process, so one frozen realization can serve
// calibrations that start at different absolute times.
class ShiftedNoise final : public NoiseSource {
  public:
    ShiftedNoise(const NoiseSource& base, double t0) : base_(base), t0_(t0) {}

    double value(double t) const override { return base_.value(t + t0_); }

    std::unique_ptr<NoiseStepper> stepper(double t0, double dt) const override {
        return base_.stepper(t0 + t0_, dt);
    }

  private:
    const NoiseSource& base_;
    double t0_;
};

// Redraw until dV(0) has the requested sign and a typical magnitude, then
// rescale so dV(0) lands exactly on target. Conditioning before the rescale
// keeps the drift statistics representative; rescaling an atypical draw by a
// huge factor would not.
NoiseModel pinned_realization(const NoiseSpec& spec, double rms, double target,
                              std::uint64_t& draw_state) {
    for (int attempt = 0; attempt < 10000; ++attempt) {
        const NoiseModel m = sample_noise_model(spec, splitmix64(draw_state));
        const double v0 = m.value(0.0);
        if (target > 0.0 ? v0 <= 0.0 : v0 >= 0.0) continue;
        const double mag = std::abs(v0);
        if (mag < 0.4 * rms || mag > 2.0 * rms) continue;
        return m.scaled(target / v0);
    }
    throw FitFailureError("pinned_realization: no acceptable draw in 10000 attempts");
}

}  // namespace

GateSpec build_gate(const std::string& name, double ez) {
    if (!std::isfinite(ez) || !(ez > 0.0))
        throw InvalidParameterError("build_gate: ez must be positive and finite");
    const DriveSegment hadamard{ez, kPi / (2.0 * std::sqrt(2.0) * ez)};
    const DriveSegment phase{0.0, kPi / (2.0 * ez)};
    GateSpec g;
    g.name = name;
    g.ez = ez;
    if (name == "hadamard") {
        g.drive = {hadamard};
    } else if (name == "phase") {
        g.drive = {phase};
    } else if (name == "bitflip") {
        g.drive = {hadamard, phase, hadamard};
    } else {
        throw InvalidParameterError("build_gate: unknown gate '" + name + "'");
    }
    g.target_unitary = Mat2::identity();
    for (const auto& seg : g.drive)
        g.target_unitary = segment_unitary(ez, seg.off_diag, seg.duration) * g.target_unitary;
    return g;
}

Vec2 apply_gate_with_noise(const GateSpec& gate, double dv_effective, const Vec2& psi) {
    Vec2 out = psi;
    for (const auto& seg : gate.drive)
        out = segment_unitary(gate.ez, seg.off_diag + dv_effective, seg.duration) * out;
    return out;
}

double fidelity(const Vec2& psi_t, const Vec2& psi_out) {
    return std::norm(inner(psi_t, psi_out));
}

FidelityReport fidelity_curve(const GateSpec& gate, const std::vector<double>& dv_values,
                              const FidelityCurveParams& params, const DetectorConfig& cfg,
                              std::uint64_t seed) {
    if (params.realizations < 1)
        throw InvalidParameterError("fidelity_curve: realizations must be >= 1");
    cfg.validate();
    NoiseSpec spec = params.noise_template;
    spec.beta = beta_for_rms(params.rms, spec.delta_omega, spec.n_components);
    spec.validate();

    const std::size_t n_pts = dv_values.size();
    const std::size_t reps = static_cast<std::size_t>(params.realizations);

    FidelityReport report;
    report.noise_values = dv_values;
    report.fidelity_raw.resize(n_pts);
    report.fidelity_raw_se.assign(n_pts, 0.0);
    report.fidelity_calibrated.resize(n_pts);
    report.fidelity_calibrated_se.resize(n_pts);

    const Vec2 psi_i{cplx(1.0), cplx(0.0)};
    const Vec2 psi_t = gate.target_unitary * psi_i;

    // Raw curve: the gate sees dV(0) itself, so each point is deterministic.
    // The zero-amplitude cell is pinned to 1: the gate equals its own target
    // by definition there, and the roundoff floor of re-evaluating it would
    // put a spurious 1e-16 offset next to the calibrated column's exact 1.
    for (std::size_t i = 0; i < n_pts; ++i)
        report.fidelity_raw[i] =
            dv_values[i] == 0.0
                ? 1.0
                : fidelity(psi_t, apply_gate_with_noise(gate, dv_values[i], psi_i));

    // Calibrated curve: fresh pinned realization + full two-phase run per
    // repetition; the gate sees dV(t_end) - dv_c, i.e. minus the residue.
    std::vector<double> cells(n_pts * reps, 1.0);
    parallel_for(n_pts * reps, params.jobs, [&](std::size_t k) {
        const std::size_t i = k / reps;
        const double x = dv_values[i];
        // The zero-amplitude point is the deterministic noiseless limit:
        // the pinned realization is identically zero and an exact estimator
        // returns dv_c = 0, so both curves sit at F = 1 by construction.
        if (x == 0.0) return;
        std::uint64_t item = seed + 0x9e3779b97f4a7c15ULL * (k + 1);
        const std::uint64_t run_seed = splitmix64(item);
        std::uint64_t draw_state = splitmix64(item);
        const NoiseModel model = pinned_realization(spec, params.rms, x, draw_state);
        const CalibrationResult cal = run_calibration(params.calibration, cfg, model, run_seed);
        cells[k] = fidelity(psi_t, apply_gate_with_noise(gate, -cal.residue, psi_i));
    });

    std::vector<double> scratch(reps);
    for (std::size_t i = 0; i < n_pts; ++i) {
        for (std::size_t r = 0; r < reps; ++r) scratch[r] = cells[i * reps + r];
        report.fidelity_calibrated[i] = mean(scratch);
        report.fidelity_calibrated_se[i] =
            reps > 1 ? std::sqrt(variance(scratch) / static_cast<double>(reps)) : 0.0;
    }
    return report;
}

ScheduleResult alternating_schedule(const std::vector<std::string>& ops,
                                    const ScheduleParams& params, const DetectorConfig& cfg,
                                    std::uint64_t seed) {
    if (ops.empty()) throw InvalidParameterError("alternating_schedule: ops must be non-empty");
    cfg.validate();
    const double gamma = cfg.gamma_m();
    const double t_cal = 2.0 * (2.0 * static_cast<double>(params.calibration.n_p) / gamma);

    std::uint64_t state = seed;
    std::unique_ptr<NoiseSource> noise[2];
    if (params.zero_noise) {
        noise[0] = std::make_unique<ConstantNoise>(0.0);
        noise[1] = std::make_unique<ConstantNoise>(0.0);
    } else {
        NoiseSpec spec = params.noise_template;
        spec.beta = beta_for_rms(params.rms, spec.delta_omega, spec.n_components);
        spec.validate();
        noise[0] = std::make_unique<NoiseModel>(sample_noise_model(spec, splitmix64(state)));
        noise[1] = std::make_unique<NoiseModel>(sample_noise_model(spec, splitmix64(state)));
    }

    ScheduleResult result;
    Vec2 psi{cplx(1.0), cplx(0.0)};  // logical state, prepared on qubit 1
    result.events.push_back({0.0, 1, "calibrate"});
    for (std::size_t k = 0; k < ops.size(); ++k) {
        const int q = static_cast<int>(k % 2);  // physical qubit executing op k
        const double t_op = static_cast<double>(k + 1) * t_cal;

        // Calibration of qubit q over [k t_cal, (k+1) t_cal]; the gate fires
        // at its end, where the residue is freshest.
        double dv_eff = 0.0;
        if (!params.zero_noise) {
            const ShiftedNoise view(*noise[q], static_cast<double>(k) * t_cal);
            const CalibrationResult cal =
                run_calibration(params.calibration, cfg, view, splitmix64(state));
            dv_eff = -cal.residue;
        }

        if (k + 1 < ops.size()) result.events.push_back({t_op, q == 0 ? 2 : 1, "calibrate"});
        if (k > 0) result.events.push_back({t_op, 0, "swap"});
        result.events.push_back({t_op, q + 1, ops[k]});

        const GateSpec gate = build_gate(ops[k], params.calibration.ez);
        const Vec2 ideal = (gate.target_unitary * psi).normalized();
        psi = apply_gate_with_noise(gate, dv_eff, psi);
        const double f = fidelity(ideal, psi);
        result.segment_fidelities.push_back(f);
        result.product_fidelity *= f;
    }
    return result;
}

}  // namespace qcal
