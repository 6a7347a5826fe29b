#include "qcal/master.hpp"

#include <algorithm>
#include <cmath>

#include "qcal/errors.hpp"
#include "qcal/stats.hpp"

namespace qcal {

namespace {

// state packed as (p, Re q, Im q); the trace is conserved exactly by both
// generator terms so rho11 stays derived
struct Packed {
    double p, qr, qi;
};

inline Packed rhs(const Packed& x, double ez, double v, double gamma_m) {
    // -i[H, rho]: dp = -2 v Im q ; dq = 2i ez q - i v (1 - 2p)
    // dephasing: dq += -gamma_m q
    return {-2.0 * v * x.qi,
            -2.0 * ez * x.qi - gamma_m * x.qr,
            2.0 * ez * x.qr - v * (1.0 - 2.0 * x.p) - gamma_m * x.qi};
}

inline Packed axpy(const Packed& x, const Packed& d, double s) {
    return {x.p + s * d.p, x.qr + s * d.qr, x.qi + s * d.qi};
}

}  // namespace

MasterTrace integrate_master(const DensityMatrix& rho0, double ez, double dv, double gamma_m,
                             double duration, double dt, std::size_t checkpoint_stride) {
    if (!(dt > 0.0) || duration < 0.0)
        throw ConfigurationError("integrate_master: need dt > 0 and duration >= 0");
    if (dt * std::max(2.0 * std::abs(ez), gamma_m) > 0.1)
        throw ConfigurationError("integrate_master: dt too coarse for (ez, gamma_m)");
    if (gamma_m < 0.0) throw InvalidParameterError("integrate_master: negative gamma_m");
    if (checkpoint_stride == 0) checkpoint_stride = 1;

    const auto n_steps = static_cast<std::size_t>(std::llround(duration / dt));
    MasterTrace trace;
    trace.times.reserve(n_steps / checkpoint_stride + 2);
    trace.states.reserve(n_steps / checkpoint_stride + 2);
    Packed x{rho0.rho00, rho0.rho01.real(), rho0.rho01.imag()};
    trace.times.push_back(0.0);
    trace.states.push_back(rho0);

    for (std::size_t k = 0; k < n_steps; ++k) {
        const Packed k1 = rhs(x, ez, dv, gamma_m);
        const Packed k2 = rhs(axpy(x, k1, 0.5 * dt), ez, dv, gamma_m);
        const Packed k3 = rhs(axpy(x, k2, 0.5 * dt), ez, dv, gamma_m);
        const Packed k4 = rhs(axpy(x, k3, dt), ez, dv, gamma_m);
        x.p += dt / 6.0 * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p);
        x.qr += dt / 6.0 * (k1.qr + 2.0 * k2.qr + 2.0 * k3.qr + k4.qr);
        x.qi += dt / 6.0 * (k1.qi + 2.0 * k2.qi + 2.0 * k3.qi + k4.qi);
        if ((k + 1) % checkpoint_stride == 0 || k + 1 == n_steps) {
            trace.times.push_back(static_cast<double>(k + 1) * dt);
            trace.states.push_back({x.p, {x.qr, x.qi}});
        }
    }
    return trace;
}

double relaxation_rate(double ez, double gamma_m, double dv) {
    const double denom = 4.0 * ez * ez + gamma_m * gamma_m;
    if (denom == 0.0)
        throw InvalidParameterError("relaxation_rate: ez and gamma_m both zero");
    return 4.0 * dv * dv * gamma_m / denom;
}

DecayFit fit_decay(const std::vector<double>& times, const std::vector<double>& rho00) {
    if (times.size() != rho00.size() || times.size() < 8)
        throw FitFailureError("fit_decay: need >= 8 paired samples");
    const double y0 = rho00.front() - 0.5;
    if (std::abs(y0) < 1e-6)
        throw FitFailureError("fit_decay: initial state already at the 1/2 fixed point");
    const double sign = y0 > 0 ? 1.0 : -1.0;

    // pass 1: log-linear on everything above the noise floor
    auto collect = [&](double t_min, double floor_frac, std::vector<double>& xs,
                       std::vector<double>& ys) {
        xs.clear();
        ys.clear();
        for (std::size_t i = 0; i < times.size(); ++i) {
            const double y = sign * (rho00[i] - 0.5);
            if (times[i] >= t_min && y > floor_frac * std::abs(y0)) {
                xs.push_back(times[i]);
                ys.push_back(std::log(y));
            }
        }
    };
    std::vector<double> xs, ys;
    collect(0.0, 1e-4, xs, ys);
    if (xs.size() < 8) throw FitFailureError("fit_decay: series does not decay toward 1/2");
    RegressionFit first = linear_regression(xs, ys);
    if (!(first.slope < 0.0))
        throw FitFailureError("fit_decay: non-decaying series (fitted slope " +
                              std::to_string(first.slope) + ")");
    const double tau_hat = -1.0 / first.slope;
    if (times.back() < 2.0 * tau_hat)
        throw FitFailureError("fit_decay: series spans less than 2 decay times");

    // pass 2: skip the early transient
    collect(tau_hat / 10.0, 1e-3, xs, ys);
    if (xs.size() < 8) throw FitFailureError("fit_decay: too few points after transient cut");
    RegressionFit second = linear_regression(xs, ys);
    if (!(second.slope < 0.0)) throw FitFailureError("fit_decay: non-decaying series");
    return {-second.slope, second.slope_se};
}

}  // namespace qcal
