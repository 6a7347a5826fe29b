#include "qcal/noise.hpp"

#include <cmath>

#include "qcal/errors.hpp"
#include "qcal/rng.hpp"

namespace qcal {

void NoiseSpec::validate() const {
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw InvalidParameterError("NoiseSpec: beta must be positive");
    if (!(delta_omega > 0.0) || !std::isfinite(delta_omega))
        throw InvalidParameterError("NoiseSpec: delta_omega must be positive");
    if (n_components < 1)
        throw InvalidParameterError("NoiseSpec: n_components must be >= 1");
}

double beta_for_rms(double rms, double delta_omega, int n_components) {
    if (!(rms > 0.0) || !(delta_omega > 0.0) || n_components < 1)
        throw InvalidParameterError("beta_for_rms: need rms > 0, delta_omega > 0, n >= 1");
    double harmonic = 0.0;
    for (int n = 1; n <= n_components; ++n) harmonic += 1.0 / n;
    return 2.0 * rms * rms * delta_omega / harmonic;
}

std::unique_ptr<NoiseStepper> NoiseSource::stepper(double t0, double dt) const {
    // generic fallback: re-evaluate value(t) each step
    class Generic final : public NoiseStepper {
      public:
        Generic(const NoiseSource& src, double t0, double dt) : src_(src), t_(t0), dt_(dt) {}
        double value() const override { return src_.value(t_); }
        void advance() override { t_ += dt_; }

      private:
        const NoiseSource& src_;
        double t_, dt_;
    };
    return std::make_unique<Generic>(*this, t0, dt);
}

std::unique_ptr<NoiseStepper> ConstantNoise::stepper(double, double) const {
    class Fixed final : public NoiseStepper {
      public:
        explicit Fixed(double v) : v_(v) {}
        double value() const override { return v_; }
        void advance() override {}

      private:
        double v_;
    };
    return std::make_unique<Fixed>(v_);
}

NoiseModel::NoiseModel(NoiseSpec spec, std::vector<double> alphas, std::vector<double> phases,
                       std::uint64_t seed)
    : spec_(spec), alphas_(std::move(alphas)), phases_(std::move(phases)), seed_(seed) {
    spec_.validate();
    if (alphas_.size() != static_cast<std::size_t>(spec_.n_components) ||
        phases_.size() != alphas_.size())
        throw InvalidParameterError("NoiseModel: component count mismatch");
    amplitudes_.resize(alphas_.size());
    for (std::size_t i = 0; i < alphas_.size(); ++i) {
        const double omega_n = (static_cast<double>(i) + 1.0) * spec_.delta_omega;
        amplitudes_[i] = std::sqrt(spec_.beta / omega_n) * alphas_[i];
    }
}

double NoiseModel::value(double t) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        const double omega_n = (static_cast<double>(i) + 1.0) * spec_.delta_omega;
        sum += amplitudes_[i] * std::cos(omega_n * t + phases_[i]);
    }
    return sum;
}

double NoiseModel::derivative(double t) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        const double omega_n = (static_cast<double>(i) + 1.0) * spec_.delta_omega;
        sum -= amplitudes_[i] * omega_n * std::sin(omega_n * t + phases_[i]);
    }
    return sum;
}

NoiseModel NoiseModel::scaled(double s) const {
    std::vector<double> a = alphas_;
    for (double& x : a) x *= s;
    return NoiseModel(spec_, std::move(a), phases_, seed_);
}

namespace {

// Oscillator bank: each component keeps (cos, sin) of its running phase and
// advances by a fixed per-step rotation. Exactly eval at t0 + k dt up to
// rounding; a periodic resync against the closed form keeps the rounding
// from accumulating over multi-million-step runs.
class BankStepper final : public NoiseStepper {
  public:
    BankStepper(const NoiseModel& model, double t0, double dt)
        : model_(model), t0_(t0), dt_(dt) {
        const auto& spec = model.spec();
        const std::size_t n = model.alphas().size();
        rot_c_.resize(n);
        rot_s_.resize(n);
        c_.resize(n);
        s_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double omega_n = (static_cast<double>(i) + 1.0) * spec.delta_omega;
            rot_c_[i] = std::cos(omega_n * dt);
            rot_s_[i] = std::sin(omega_n * dt);
        }
        sync(0);
    }

    double value() const override { return current_; }

    void advance() override {
        ++step_;
        if ((step_ & resync_mask) == 0) {
            sync(step_);
            return;
        }
        double sum = 0.0;
        const auto& amp = model_.amplitudes();
        for (std::size_t i = 0; i < c_.size(); ++i) {
            const double c = c_[i] * rot_c_[i] - s_[i] * rot_s_[i];
            const double s = s_[i] * rot_c_[i] + c_[i] * rot_s_[i];
            c_[i] = c;
            s_[i] = s;
            sum += amp[i] * c;
        }
        current_ = sum;
    }

  private:
    static constexpr std::uint64_t resync_mask = (1u << 16) - 1;

    void sync(std::uint64_t step) {
        const auto& spec = model_.spec();
        const auto& amp = model_.amplitudes();
        const double t = t0_ + static_cast<double>(step) * dt_;
        double sum = 0.0;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            const double omega_n = (static_cast<double>(i) + 1.0) * spec.delta_omega;
            const double phase = omega_n * t + model_.phases()[i];
            c_[i] = std::cos(phase);
            s_[i] = std::sin(phase);
            sum += amp[i] * c_[i];
        }
        current_ = sum;
    }

    const NoiseModel& model_;
    double t0_, dt_;
    std::uint64_t step_ = 0;
    double current_ = 0.0;
    std::vector<double> rot_c_, rot_s_, c_, s_;
};

}  // namespace

std::unique_ptr<NoiseStepper> NoiseModel::stepper(double t0, double dt) const {
    return std::make_unique<BankStepper>(*this, t0, dt);
}

NoiseModel sample_noise_model(const NoiseSpec& spec, std::uint64_t seed) {
    spec.validate();
    Rng rng(seed, 0x6e6f697365ULL);  // dedicated noise stream
    std::vector<double> alphas(spec.n_components);
    std::vector<double> phases(spec.n_components);
    for (int i = 0; i < spec.n_components; ++i) alphas[i] = rng.normal();
    for (int i = 0; i < spec.n_components; ++i) phases[i] = rng.uniform_angle();
    return NoiseModel(spec, std::move(alphas), std::move(phases), seed);
}

}  // namespace qcal
