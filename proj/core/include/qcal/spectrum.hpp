#pragma once

#include <complex>
#include <vector>

namespace qcal {

struct SpectrumPoint {
    double omega = 0.0;  // angular frequency
    double power = 0.0;  // one-sided PSD estimate
};

// In-place radix-2 FFT; size must be a power of two.
void fft_radix2(std::vector<std::complex<double>>& a);

// One-sided periodogram of a real series sampled at sample_dt. Requires at
// least 2^14 samples (shorter series cannot resolve the band; throws
// InvalidParameterError); the series is truncated to the largest power of
// two. DC bin is dropped.
std::vector<SpectrumPoint> estimate_spectrum(const std::vector<double>& samples,
                                             double sample_dt);

// Average several periodograms bin by bin (same sampling assumed).
std::vector<SpectrumPoint> average_spectra(const std::vector<std::vector<SpectrumPoint>>& specs);

// Log-log slope of power vs omega over [omega_min, omega_max].
double fit_loglog_slope(const std::vector<SpectrumPoint>& spectrum, double omega_min,
                        double omega_max);

}  // namespace qcal
