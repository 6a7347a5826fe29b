#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qcal/calibration.hpp"
#include "qcal/mat2.hpp"
#include "qcal/noise.hpp"

namespace qcal {

struct DriveSegment {
    double off_diag = 0.0;  // control value of the off-diagonal element
    double duration = 0.0;
};

// target_unitary is defined self-consistently as the zero-noise product of
// the drive segments; the bit-flip construction additionally satisfies
// |<1|U|0>|^2 = 1.
struct GateSpec {
    std::string name;
    double ez = 0.0;
    Mat2 target_unitary;
    std::vector<DriveSegment> drive;

    double total_duration() const {
        double t = 0.0;
        for (const auto& s : drive) t += s.duration;
        return t;
    }
};

// name in {hadamard, phase, bitflip}:
//   hadamard: off_diag = ez for pi/(2 sqrt2 ez) (axis (sigma_x - sigma_z)/sqrt2)
//   phase:    off_diag = 0 for pi/(2 ez) (sigma_z rotation; the only reading
//             under which hadamard*phase*hadamard flips the basis)
//   bitflip:  hadamard then phase then hadamard
GateSpec build_gate(const std::string& name, double ez);

// Evolve psi under each segment with off_diag = drive + dv_effective, exact
// segment exponentials; dV is quasi-static during the gate.
Vec2 apply_gate_with_noise(const GateSpec& gate, double dv_effective, const Vec2& psi);

// |<a|b>|^2
double fidelity(const Vec2& psi_t, const Vec2& psi_out);

struct FidelityReport {
    std::vector<double> noise_values;
    std::vector<double> fidelity_raw;
    std::vector<double> fidelity_raw_se;
    std::vector<double> fidelity_calibrated;
    std::vector<double> fidelity_calibrated_se;
};

struct FidelityCurveParams {
    CalibrationParams calibration;
    NoiseSpec noise_template;  // beta ignored; rescaled so dV(0) hits each target
    double rms = 0.8;
    int realizations = 50;
    unsigned jobs = 1;
};

// Raw curve: dv_effective = dV(0) exactly. Calibrated curve: full two-phase
// calibration on a fresh realization per repetition, then dv_effective =
// dV(t_gate) - dv_c at t_gate = calibration end.
FidelityReport fidelity_curve(const GateSpec& gate, const std::vector<double>& dv_values,
                              const FidelityCurveParams& params, const DetectorConfig& cfg,
                              std::uint64_t seed);

struct ScheduleEvent {
    double t = 0.0;
    int qubit = 0;  // 1 or 2; 0 for the logical swap
    std::string action;
};

struct ScheduleResult {
    std::vector<ScheduleEvent> events;
    std::vector<double> segment_fidelities;
    double product_fidelity = 1.0;
};

struct ScheduleParams {
    CalibrationParams calibration;
    NoiseSpec noise_template;
    double rms = 0.8;
    bool zero_noise = false;  // replaces both noise processes with dV = 0
};

// Two physical qubits with independent noise realizations. q1 calibrates
// first; each op then runs on the freshly calibrated qubit while the other
// recalibrates; an ideal swap moves the logical state before each handoff.
ScheduleResult alternating_schedule(const std::vector<std::string>& ops,
                                    const ScheduleParams& params, const DetectorConfig& cfg,
                                    std::uint64_t seed);

}  // namespace qcal
