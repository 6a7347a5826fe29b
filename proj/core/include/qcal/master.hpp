#pragma once

#include <vector>

#include "qcal/qubit.hpp"

namespace qcal {

// Ensemble-averaged trace; states may be mixed.
struct MasterTrace {
    std::vector<double> times;
    std::vector<DensityMatrix> states;
};

// RK4 on d rho/dt = -i [H, rho] - (gamma_m/4) [sz, [sz, rho]] with fixed
// dV (the rate derivation treats dV as quasi-static). Checkpoints every
// checkpoint_stride steps (and always the final state). Guard:
// dt * max(2 ez, gamma_m) <= 0.1.
MasterTrace integrate_master(const DensityMatrix& rho0, double ez, double dv, double gamma_m,
                             double duration, double dt, std::size_t checkpoint_stride = 1);

// tau_a^{-1} = 4 dV^2 gamma_m / (4 ez^2 + gamma_m^2). Throws
// InvalidParameterError when ez = gamma_m = 0 (denominator vanishes).
double relaxation_rate(double ez, double gamma_m, double dv);

struct DecayFit {
    double rate = 0.0;
    double stderr_rate = 0.0;
};

// Least-squares fit of rho00(t) = 1/2 + (rho00(0) - 1/2) e^{-t/tau}.
// Log-linear two-pass: the second pass starts at tau_hat/10 to skip the
// non-exponential transient. Requires >= 2 decay times of span;
// non-decaying input throws FitFailureError.
DecayFit fit_decay(const std::vector<double>& times, const std::vector<double>& rho00);

inline DecayFit fit_decay(const MasterTrace& trace) {
    std::vector<double> r;
    r.reserve(trace.states.size());
    for (const auto& s : trace.states) r.push_back(s.rho00);
    return fit_decay(trace.times, r);
}

}  // namespace qcal
