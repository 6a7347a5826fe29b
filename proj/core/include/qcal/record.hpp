#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qcal/qubit.hpp"

namespace qcal {

struct DetectorConfig;  // detector.hpp

struct WindowSample {
    double t = 0.0;      // left edge of the window, global clock
    double i_bar = 0.0;  // block mean of the raw current
};

// Optional downsampled state log alongside the current record.
struct StateSample {
    double t = 0.0;
    double rho00 = 0.0;
    double re01 = 0.0;
    double im01 = 0.0;
    double dv = 0.0;  // true noise value at t (simulation-only truth)
};

// Raw record plus its derived views. raw[k] is the current over
// [t0 + k dt, t0 + (k+1) dt); windowed/bits/switch_times are filled by the
// pipeline stages below.
struct TrajectoryRecord {
    double dt = 0.0;
    double t0 = 0.0;
    std::vector<double> raw;
    std::vector<WindowSample> windowed;
    std::vector<std::uint8_t> bits;
    std::vector<double> switch_times;
    std::vector<StateSample> state_log;
    DensityMatrix final_state;
};

// Non-overlapping block means on the 2/gamma_m grid; the partial trailing
// block is discarded. Requires >= 10 samples per window
// (ConfigurationError otherwise).
std::vector<WindowSample> window_average(const std::vector<double>& raw, double dt,
                                         double gamma_m, double t0 = 0.0);

// Symmetric Schmitt trigger about the midpoint (i0+i1)/2: fire up when the
// window mean crosses midpoint + h*dI, down when below midpoint - h*dI.
// Initial bit from the nearest level. h in [0, 0.5).
std::vector<std::uint8_t> binarize(const std::vector<WindowSample>& windowed,
                                   const DetectorConfig& cfg, double hysteresis_fraction);

// Adjacent unequal pairs; each event is stamped with the window time of the
// new value.
std::pair<long, std::vector<double>> count_switchings(const std::vector<std::uint8_t>& bits,
                                                      const std::vector<WindowSample>& windowed);

// Convenience: fill windowed/bits/switch_times of a record in place.
void apply_pipeline(TrajectoryRecord& record, const DetectorConfig& cfg,
                    double hysteresis_fraction);

}  // namespace qcal
