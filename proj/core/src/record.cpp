#include "qcal/record.hpp"

#include <cmath>

#include "qcal/detector.hpp"
#include "qcal/errors.hpp"

namespace qcal {

std::vector<WindowSample> window_average(const std::vector<double>& raw, double dt,
                                         double gamma_m, double t0) {
    if (!(dt > 0.0) || !(gamma_m > 0.0))
        throw ConfigurationError("window_average: dt and gamma_m must be positive");
    const double window = 2.0 / gamma_m;
    const auto per_window = static_cast<std::size_t>(std::llround(window / dt));
    if (per_window < 10)
        throw ConfigurationError("window_average: fewer than 10 samples per 2/gamma_m window");
    const std::size_t n_windows = raw.size() / per_window;  // partial tail discarded
    std::vector<WindowSample> out;
    out.reserve(n_windows);
    for (std::size_t w = 0; w < n_windows; ++w) {
        double sum = 0.0;
        const std::size_t base = w * per_window;
        for (std::size_t k = 0; k < per_window; ++k) sum += raw[base + k];
        out.push_back({t0 + static_cast<double>(w) * window,
                       sum / static_cast<double>(per_window)});
    }
    return out;
}

std::vector<std::uint8_t> binarize(const std::vector<WindowSample>& windowed,
                                   const DetectorConfig& cfg, double hysteresis_fraction) {
    if (hysteresis_fraction < 0.0 || hysteresis_fraction >= 0.5)
        throw InvalidParameterError("binarize: hysteresis_fraction outside [0, 0.5)");
    std::vector<std::uint8_t> bits;
    bits.reserve(windowed.size());
    if (windowed.empty()) return bits;
    const double mid = cfg.midpoint();
    const double guard = hysteresis_fraction * cfg.delta_i();
    const double up = mid + guard;
    const double down = mid - guard;
    const bool i1_high = cfg.i1 > cfg.i0;
    // initial bit from the nearest level
    std::uint8_t state = (windowed.front().i_bar > mid) == i1_high ? 1 : 0;
    for (const auto& w : windowed) {
        const double high_side = i1_high ? w.i_bar : 2.0 * mid - w.i_bar;  // fold so i1 is high
        if (state == 0 && high_side > up)
            state = 1;
        else if (state == 1 && high_side < down)
            state = 0;
        bits.push_back(state);
    }
    return bits;
}

std::pair<long, std::vector<double>> count_switchings(const std::vector<std::uint8_t>& bits,
                                                      const std::vector<WindowSample>& windowed) {
    if (!windowed.empty() && bits.size() != windowed.size())
        throw InvalidParameterError("count_switchings: bits/windowed length mismatch");
    long count = 0;
    std::vector<double> times;
    for (std::size_t i = 1; i < bits.size(); ++i) {
        if (bits[i] != bits[i - 1]) {
            ++count;
            if (!windowed.empty()) times.push_back(windowed[i].t);
        }
    }
    return {count, std::move(times)};
}

void apply_pipeline(TrajectoryRecord& record, const DetectorConfig& cfg,
                    double hysteresis_fraction) {
    record.windowed = window_average(record.raw, record.dt, cfg.gamma_m(), record.t0);
    record.bits = binarize(record.windowed, cfg, hysteresis_fraction);
    auto [count, times] = count_switchings(record.bits, record.windowed);
    (void)count;
    record.switch_times = std::move(times);
}

}  // namespace qcal
