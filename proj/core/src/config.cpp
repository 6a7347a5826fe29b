#include "qcal/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include "json.hpp"
#include "qcal/errors.hpp"

namespace qcal {

using nlohmann::json;

double NoiseConfig::rms() const {
    if (silent()) return 0.0;
    // beta_for_rms is linear in rms^2, so invert through the unit value.
    return std::sqrt(beta / beta_for_rms(1.0, delta_omega, n_components));
}

void ExperimentConfig::validate() const {
    if (!std::isfinite(ez) || !(ez > 0.0))
        throw ConfigurationError("config: ez must be positive and finite");
    detector.validate();
    if (!std::isfinite(noise.beta) || noise.beta < 0.0)
        throw ConfigurationError("config: noise.beta must be >= 0");
    if (!noise.silent()) noise.spec().validate();
    if (protocol.n_p < 1) throw ConfigurationError("config: protocol.n_p must be >= 1");
    if (!(protocol.hysteresis_fraction >= 0.0) || protocol.hysteresis_fraction >= 0.5)
        throw ConfigurationError("config: protocol.hysteresis_fraction outside [0, 0.5)");
    if (run.repetitions < 1) throw ConfigurationError("config: run.repetitions must be >= 1");
    if (sweep) {
        if (sweep->bandwidths.empty())
            throw ConfigurationError("config: sweep.bandwidths must be non-empty");
        for (double b : sweep->bandwidths)
            if (!std::isfinite(b) || !(b > 0.0))
                throw ConfigurationError("config: sweep.bandwidths entries must be positive");
        if (sweep->repetitions < 1)
            throw ConfigurationError("config: sweep.repetitions must be >= 1");
        if (!(sweep->rms > 0.0)) throw ConfigurationError("config: sweep.rms must be positive");
    }
    if (gates) {
        if (gates->dv_values.empty())
            throw ConfigurationError("config: gates.dv_values must be non-empty");
        for (double v : gates->dv_values)
            if (!std::isfinite(v))
                throw ConfigurationError("config: gates.dv_values entries must be finite");
        if (gates->realizations < 1)
            throw ConfigurationError("config: gates.realizations must be >= 1");
        if (!(gates->rms > 0.0)) throw ConfigurationError("config: gates.rms must be positive");
        for (const auto& name : gates->schedule)
            if (name != "hadamard" && name != "phase" && name != "bitflip")
                throw ConfigurationError("config: gates.schedule has unknown gate '" + name + "'");
    }
}

namespace {

void check_keys(const json& j, const std::string& where,
                std::initializer_list<const char*> required,
                std::initializer_list<const char*> optional) {
    if (!j.is_object()) throw ConfigurationError("config: " + where + " must be an object");
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* k : required)
            if (item.key() == k) known = true;
        for (const char* k : optional)
            if (item.key() == k) known = true;
        if (!known)
            throw ConfigurationError("config: unknown key '" + where + "." + item.key() + "'");
    }
    for (const char* k : required)
        if (!j.contains(k))
            throw ConfigurationError("config: missing key '" + where + "." + std::string(k) + "'");
}

double get_num(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigurationError("config: " + path + " must be a number");
    return j.get<double>();
}

long get_int(const json& j, const std::string& path) {
    if (!j.is_number_integer())
        throw ConfigurationError("config: " + path + " must be an integer");
    return j.get<long>();
}

std::uint64_t get_seed(const json& j, const std::string& path) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer() && j.get<long long>() >= 0)
        return static_cast<std::uint64_t>(j.get<long long>());
    throw ConfigurationError("config: " + path + " must be a non-negative integer");
}

std::string get_str(const json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigurationError("config: " + path + " must be a string");
    return j.get<std::string>();
}

std::vector<double> get_num_array(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigurationError("config: " + path + " must be an array");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& e : j) out.push_back(get_num(e, path + "[]"));
    return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigurationError(std::string("config: ") + e.what());
    }
    ExperimentConfig cfg;
    check_keys(j, "$", {"ez", "detector", "noise"}, {"protocol", "run", "sweep", "gates"});
    cfg.ez = get_num(j.at("ez"), "$.ez");

    const json& d = j.at("detector");
    check_keys(d, "$.detector", {"i0", "i1", "s_i", "dt"}, {});
    cfg.detector.i0 = get_num(d.at("i0"), "$.detector.i0");
    cfg.detector.i1 = get_num(d.at("i1"), "$.detector.i1");
    cfg.detector.s_i = get_num(d.at("s_i"), "$.detector.s_i");
    cfg.detector.dt = get_num(d.at("dt"), "$.detector.dt");

    const json& n = j.at("noise");
    check_keys(n, "$.noise", {"delta_omega", "n_components"}, {"beta", "rms", "noise_seed"});
    cfg.noise.delta_omega = get_num(n.at("delta_omega"), "$.noise.delta_omega");
    cfg.noise.n_components = static_cast<int>(get_int(n.at("n_components"), "$.noise.n_components"));
    if (n.contains("beta") == n.contains("rms"))
        throw ConfigurationError("config: noise needs exactly one of beta or rms");
    if (n.contains("beta")) {
        cfg.noise.beta = get_num(n.at("beta"), "$.noise.beta");
    } else {
        const double rms = get_num(n.at("rms"), "$.noise.rms");
        if (!(rms >= 0.0)) throw ConfigurationError("config: noise.rms must be >= 0");
        cfg.noise.beta =
            rms == 0.0 ? 0.0 : beta_for_rms(rms, cfg.noise.delta_omega, cfg.noise.n_components);
    }
    if (n.contains("noise_seed")) cfg.noise.noise_seed = get_seed(n.at("noise_seed"), "$.noise.noise_seed");

    if (j.contains("protocol")) {
        const json& p = j.at("protocol");
        check_keys(p, "$.protocol", {}, {"n_p", "hysteresis_fraction"});
        if (p.contains("n_p")) cfg.protocol.n_p = get_int(p.at("n_p"), "$.protocol.n_p");
        if (p.contains("hysteresis_fraction"))
            cfg.protocol.hysteresis_fraction =
                get_num(p.at("hysteresis_fraction"), "$.protocol.hysteresis_fraction");
    }
    if (j.contains("run")) {
        const json& r = j.at("run");
        check_keys(r, "$.run", {}, {"seed", "repetitions", "output_dir"});
        if (r.contains("seed")) cfg.run.seed = get_seed(r.at("seed"), "$.run.seed");
        if (r.contains("repetitions"))
            cfg.run.repetitions = static_cast<int>(get_int(r.at("repetitions"), "$.run.repetitions"));
        if (r.contains("output_dir")) cfg.run.output_dir = get_str(r.at("output_dir"), "$.run.output_dir");
    }
    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        check_keys(s, "$.sweep", {"bandwidths"}, {"repetitions", "rms"});
        SweepConfig sw;
        sw.bandwidths = get_num_array(s.at("bandwidths"), "$.sweep.bandwidths");
        if (s.contains("repetitions"))
            sw.repetitions = static_cast<int>(get_int(s.at("repetitions"), "$.sweep.repetitions"));
        if (s.contains("rms")) sw.rms = get_num(s.at("rms"), "$.sweep.rms");
        cfg.sweep = sw;
    }
    if (j.contains("gates")) {
        const json& g = j.at("gates");
        check_keys(g, "$.gates", {"dv_values"}, {"realizations", "rms", "schedule"});
        GatesConfig gc;
        gc.dv_values = get_num_array(g.at("dv_values"), "$.gates.dv_values");
        if (g.contains("realizations"))
            gc.realizations = static_cast<int>(get_int(g.at("realizations"), "$.gates.realizations"));
        if (g.contains("rms")) gc.rms = get_num(g.at("rms"), "$.gates.rms");
        if (g.contains("schedule")) {
            if (!g.at("schedule").is_array())
                throw ConfigurationError("config: $.gates.schedule must be an array");
            for (const auto& e : g.at("schedule"))
                gc.schedule.push_back(get_str(e, "$.gates.schedule[]"));
        }
        cfg.gates = gc;
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigurationError("config: cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string config_json(const ExperimentConfig& cfg, int indent) {
    json j;
    j["ez"] = cfg.ez;
    j["detector"] = {{"i0", cfg.detector.i0},
                     {"i1", cfg.detector.i1},
                     {"s_i", cfg.detector.s_i},
                     {"dt", cfg.detector.dt}};
    j["noise"] = {{"beta", cfg.noise.beta},
                  {"delta_omega", cfg.noise.delta_omega},
                  {"n_components", cfg.noise.n_components},
                  {"noise_seed", cfg.noise.noise_seed}};
    j["protocol"] = {{"n_p", cfg.protocol.n_p},
                     {"hysteresis_fraction", cfg.protocol.hysteresis_fraction}};
    j["run"] = {{"seed", cfg.run.seed},
                {"repetitions", cfg.run.repetitions},
                {"output_dir", cfg.run.output_dir}};
    if (cfg.sweep)
        j["sweep"] = {{"bandwidths", cfg.sweep->bandwidths},
                      {"repetitions", cfg.sweep->repetitions},
                      {"rms", cfg.sweep->rms}};
    if (cfg.gates)
        j["gates"] = {{"dv_values", cfg.gates->dv_values},
                      {"realizations", cfg.gates->realizations},
                      {"rms", cfg.gates->rms},
                      {"schedule", cfg.gates->schedule}};
    return j.dump(indent);
}

}  // namespace qcal
