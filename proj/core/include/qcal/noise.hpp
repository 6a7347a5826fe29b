#pragma once

#include <cstdint>
#include <memory>
#include <vector>

namespace qcal {

// Discrete 1/f spectrum bookkeeping: components at omega_n = n * delta_omega
// for n = 1..n_components, band width B_w = n_components * delta_omega.
// Starting the grid at delta_omega avoids the omega -> 0 divergence of
// sqrt(beta/omega).
struct NoiseSpec {
    double beta = 0.0;
    double delta_omega = 0.0;
    int n_components = 0;

    double band_width() const { return n_components * delta_omega; }

    // Throws InvalidParameterError unless beta > 0, delta_omega > 0, n >= 1.
    void validate() const;
};

// beta such that the ensemble RMS of dV(t) equals rms:
// <dV^2> = (beta/2) sum_n 1/(n delta_omega) = beta H_N / (2 delta_omega).
double beta_for_rms(double rms, double delta_omega, int n_components);

// Per-step noise evaluator handed to trajectory loops. advance() moves one
// fixed dt; value() is the current dV.
class NoiseStepper {
  public:
    virtual ~NoiseStepper() = default;
    virtual double value() const = 0;
    virtual void advance() = 0;
};

// Any frozen-in-time scalar control noise dV(t).
class NoiseSource {
  public:
    virtual ~NoiseSource() = default;
    virtual double value(double t) const = 0;
    virtual std::unique_ptr<NoiseStepper> stepper(double t0, double dt) const;
};

class ConstantNoise final : public NoiseSource {
  public:
    explicit ConstantNoise(double v) : v_(v) {}
    double value(double) const override { return v_; }
    std::unique_ptr<NoiseStepper> stepper(double t0, double dt) const override;

  private:
    double v_;
};

// Frozen realization of the random-phase cosine sum:
// dV(t) = sum_n sqrt(beta/omega_n) alpha_n cos(omega_n t + phi_n),
// alpha_n ~ N(0,1), phi_n ~ U[0, 2pi). Immutable after sampling; one
// realization persists for a whole experiment.
class NoiseModel final : public NoiseSource {
  public:
    NoiseModel(NoiseSpec spec, std::vector<double> alphas, std::vector<double> phases,
               std::uint64_t seed);

    const NoiseSpec& spec() const { return spec_; }
    const std::vector<double>& alphas() const { return alphas_; }
    const std::vector<double>& phases() const { return phases_; }
    const std::vector<double>& amplitudes() const { return amplitudes_; }
    std::uint64_t seed() const { return seed_; }

    double value(double t) const override;

    // analytic d(dV)/dt, for the differentiability property
    double derivative(double t) const;

    std::unique_ptr<NoiseStepper> stepper(double t0, double dt) const override;

    // Same realization with every amplitude scaled by s (pins dV(0) to a
    // target in gate sweeps).
    NoiseModel scaled(double s) const;

  private:
    NoiseSpec spec_;
    std::vector<double> alphas_;
    std::vector<double> phases_;
    std::vector<double> amplitudes_;  // sqrt(beta/omega_n) * alpha_n, cached
    std::uint64_t seed_;
};

NoiseModel sample_noise_model(const NoiseSpec& spec, std::uint64_t seed);

}  // namespace qcal
