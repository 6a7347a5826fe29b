#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcal/detector.hpp"
#include "qcal/noise.hpp"

namespace qcal {

inline constexpr const char* kLibraryVersion = "0.1.0";

// beta = 0 means dV is identically zero; the spectrum fields are then
// ignored by the runners. A config may specify "rms" instead of "beta";
// the loader resolves it to beta immediately, so this struct is always
// canonical.
struct NoiseConfig {
    double beta = 0.0;
    double delta_omega = 0.0;
    int n_components = 0;
    std::uint64_t noise_seed = 1;

    NoiseSpec spec() const { return {beta, delta_omega, n_components}; }
    bool silent() const { return beta == 0.0; }
    double rms() const;
};

struct ProtocolConfig {
    long n_p = 2000;
    double hysteresis_fraction = 0.33;
};

struct RunConfig {
    std::uint64_t seed = 1;
    int repetitions = 1;
    std::string output_dir = "out";
};

struct SweepConfig {
    std::vector<double> bandwidths;
    int repetitions = 20;
    double rms = 0.8;
};

struct GatesConfig {
    std::vector<double> dv_values;
    int realizations = 50;
    double rms = 0.8;
    std::vector<std::string> schedule;  // empty = no schedule simulation
};

struct ExperimentConfig {
    double ez = 0.0;
    DetectorConfig detector;
    NoiseConfig noise;
    ProtocolConfig protocol;
    RunConfig run;
    std::optional<SweepConfig> sweep;
    std::optional<GatesConfig> gates;

    // Re-runs every module-level invariant; throws ConfigurationError.
    void validate() const;
};

// Strict schema: unknown keys at any level are hard errors, reported with
// their full path. Sections protocol/run/sweep/gates are optional; ez,
// detector and noise are required.
ExperimentConfig parse_config(const std::string& json_text);

// parse_config over the file contents; unreadable file -> ConfigurationError.
ExperimentConfig load_config(const std::string& path);

// Canonical JSON of a resolved config; parse_config round-trips it.
std::string config_json(const ExperimentConfig& cfg, int indent = 2);

}  // namespace qcal
