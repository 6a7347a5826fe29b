#include "qcal/spectrum.hpp"

#include <cmath>

#include "qcal/errors.hpp"
#include "qcal/stats.hpp"

namespace qcal {

void fft_radix2(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw InvalidParameterError("fft_radix2: size must be a power of two");
    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * M_PI / static_cast<double>(len);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

std::vector<SpectrumPoint> estimate_spectrum(const std::vector<double>& samples,
                                             double sample_dt) {
    if (!(sample_dt > 0.0)) throw InvalidParameterError("estimate_spectrum: sample_dt <= 0");
    if (samples.size() < (1u << 14))
        throw InvalidParameterError("estimate_spectrum: need at least 2^14 samples, got " +
                                    std::to_string(samples.size()));
    std::size_t n = 1;
    while (n * 2 <= samples.size()) n *= 2;

    std::vector<std::complex<double>> buf(n);
    for (std::size_t i = 0; i < n; ++i) buf[i] = samples[i];
    fft_radix2(buf);

    // one-sided PSD: P(omega_k) = dt |X_k|^2 / n, omega_k = 2 pi k/(n dt)
    std::vector<SpectrumPoint> out;
    out.reserve(n / 2 - 1);
    const double domega = 2.0 * M_PI / (static_cast<double>(n) * sample_dt);
    for (std::size_t k = 1; k < n / 2; ++k) {
        out.push_back({domega * static_cast<double>(k),
                       sample_dt * std::norm(buf[k]) / static_cast<double>(n)});
    }
    return out;
}

std::vector<SpectrumPoint> average_spectra(const std::vector<std::vector<SpectrumPoint>>& specs) {
    if (specs.empty()) throw InvalidParameterError("average_spectra: empty input");
    std::vector<SpectrumPoint> out = specs.front();
    for (std::size_t s = 1; s < specs.size(); ++s) {
        if (specs[s].size() != out.size())
            throw InvalidParameterError("average_spectra: mismatched spectra");
        for (std::size_t k = 0; k < out.size(); ++k) out[k].power += specs[s][k].power;
    }
    for (auto& p : out) p.power /= static_cast<double>(specs.size());
    return out;
}

double fit_loglog_slope(const std::vector<SpectrumPoint>& spectrum, double omega_min,
                        double omega_max) {
    std::vector<double> xs, ys;
    for (const auto& p : spectrum) {
        if (p.omega < omega_min || p.omega > omega_max || p.power <= 0.0) continue;
        xs.push_back(std::log(p.omega));
        ys.push_back(std::log(p.power));
    }
    if (xs.size() < 4)
        throw FitFailureError("fit_loglog_slope: fewer than 4 usable bins in band");
    return linear_regression(xs, ys).slope;
}

}  // namespace qcal
