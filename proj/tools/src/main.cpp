// qcal: experiment runner for the measured-qubit calibration study.
// Subcommands cover the single-trajectory record, the ensemble relaxation
// check, the two-phase calibration, the band-width sweep, and the gate
// fidelity curves. Every output directory gets a manifest sufficient to
// re-run the command bit-identically.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qcal/calibration.hpp"
#include "qcal/config.hpp"
#include "qcal/detector.hpp"
#include "qcal/errors.hpp"
#include "qcal/gates.hpp"
#include "qcal/io.hpp"
#include "qcal/master.hpp"
#include "qcal/parallel.hpp"
#include "qcal/record.hpp"
#include "qcal/rng.hpp"

namespace {

using nlohmann::json;
using namespace qcal;

struct CliOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    unsigned jobs = default_jobs();
    std::optional<std::string> out;
    std::optional<double> duration;
    bool euler = false;
};

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t idx) {
    std::uint64_t s = base + 0x9e3779b97f4a7c15ULL * (idx + 1);
    return splitmix64(s);
}

std::unique_ptr<NoiseSource> make_noise(const ExperimentConfig& cfg, std::uint64_t realization_seed) {
    if (cfg.noise.silent()) return std::make_unique<ConstantNoise>(0.0);
    return std::make_unique<NoiseModel>(sample_noise_model(cfg.noise.spec(), realization_seed));
}

StepMode step_mode(const CliOptions& opts) {
    return opts.euler ? StepMode::euler : StepMode::exact;
}

CalibrationParams calibration_params(const ExperimentConfig& cfg, const CliOptions& opts) {
    return {cfg.ez, cfg.protocol.n_p, cfg.protocol.hysteresis_fraction, step_mode(opts)};
}

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
    return cfg.run.output_dir + "/" + name;
}

void write_manifest(const ExperimentConfig& cfg, const CliOptions& opts,
                    const std::string& command, json derived) {
    json m;
    m["command"] = command;
    m["version"] = kLibraryVersion;
    m["config"] = json::parse(config_json(cfg));
    m["effective"] = {{"seed", cfg.run.seed},
                      {"jobs", opts.jobs},
                      {"euler", opts.euler},
                      {"duration_override", opts.duration ? json(*opts.duration) : json()}};
    derived["gamma_m"] = cfg.detector.gamma_m();
    derived["sample_sigma"] = cfg.detector.sample_sigma();
    derived["noise_rms"] = cfg.noise.rms();
    m["derived"] = std::move(derived);
    m["warnings"] = cfg.detector.warnings(cfg.ez, cfg.noise.rms());
    write_text_file(out_path(cfg, "manifest.json"), m.dump(2) + "\n");
}

void write_windowed_csv(const std::string& path, const std::vector<WindowSample>& windowed,
                        const std::vector<std::uint8_t>& bits) {
    CsvWriter csv(path, {"t", "I_bar", "bit"});
    for (std::size_t i = 0; i < windowed.size(); ++i)
        csv.row({windowed[i].t, windowed[i].i_bar, static_cast<double>(bits[i])});
    csv.close();
}

// ---------------------------------------------------------------- trajectory

int cmd_trajectory(const ExperimentConfig& cfg, const CliOptions& opts) {
    const double gamma = cfg.detector.gamma_m();
    const double duration =
        opts.duration.value_or(2.0 * static_cast<double>(cfg.protocol.n_p) / gamma);
    const auto noise = make_noise(cfg, cfg.noise.noise_seed);

    const auto window_steps =
        static_cast<std::size_t>(std::llround(2.0 / gamma / cfg.detector.dt));
    TrajectoryParams tp{cfg.ez, 0.0, step_mode(opts)};
    TrajectoryRecord rec =
        run_trajectory(DensityMatrix::pure0(), tp, *noise, cfg.detector, duration,
                       cfg.run.seed, 0.0, {window_steps == 0 ? 1 : window_steps});
    apply_pipeline(rec, cfg.detector, cfg.protocol.hysteresis_fraction);

    {
        CsvWriter csv(out_path(cfg, "raw.csv"), {"t", "I_raw"});
        for (std::size_t k = 0; k < rec.raw.size(); ++k)
            csv.row({rec.t0 + static_cast<double>(k) * rec.dt, rec.raw[k]});
        csv.close();
    }
    {
        CsvWriter csv(out_path(cfg, "state.csv"), {"t", "rho00", "re_rho01", "im_rho01", "dV_true"});
        for (const auto& s : rec.state_log) csv.row({s.t, s.rho00, s.re01, s.im01, s.dv});
        csv.close();
    }
    write_windowed_csv(out_path(cfg, "windowed.csv"), rec.windowed, rec.bits);
    {
        CsvWriter csv(out_path(cfg, "events.csv"), {"event", "t"});
        for (std::size_t i = 0; i < rec.switch_times.size(); ++i)
            csv.row({static_cast<double>(i), rec.switch_times[i]});
        csv.close();
    }

    SvgSeries cur;
    for (const auto& w : rec.windowed) {
        cur.x.push_back(w.t);
        cur.y.push_back(w.i_bar);
    }
    write_svg_quicklook(out_path(cfg, "quicklook_current.svg"), {cur},
                        "windowed detector current", "t", "I_bar");
    SvgSeries pop;
    for (const auto& s : rec.state_log) {
        pop.x.push_back(s.t);
        pop.y.push_back(s.rho00);
    }
    write_svg_quicklook(out_path(cfg, "quicklook_rho00.svg"), {pop}, "qubit population", "t",
                        "rho00");

    write_manifest(cfg, opts, "trajectory",
                   {{"duration", duration},
                    {"n_steps", rec.raw.size()},
                    {"n_windows", rec.windowed.size()},
                    {"n_switchings", rec.switch_times.size()},
                    {"dv_at_start", noise->value(0.0)}});
    return 0;
}

// ------------------------------------------------------------------ ensemble

int cmd_ensemble(const ExperimentConfig& cfg, const CliOptions& opts) {
    const double gamma = cfg.detector.gamma_m();
    const double dt = cfg.detector.dt;
    const auto noise = make_noise(cfg, cfg.noise.noise_seed);
    const double dv0 = noise->value(0.0);
    const double analytic = relaxation_rate(cfg.ez, gamma, dv0);
    const double duration = opts.duration.value_or(
        analytic > 0.0 ? 5.0 / analytic : 2.0 * static_cast<double>(cfg.protocol.n_p) / gamma);

    const auto n_steps = static_cast<std::size_t>(std::llround(duration / dt));
    const auto window_steps = static_cast<std::size_t>(std::llround(2.0 / gamma / dt));
    const std::size_t stride = window_steps == 0 ? 1 : window_steps;

    // the RK4 step guard needs dt * max(2 ez, gamma) <= 0.1, so subdivide the
    // detector step; the checkpoint grid j*stride*dt is unchanged
    const double rate_scale = std::max(2.0 * std::abs(cfg.ez), gamma);
    const auto sub = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(dt * rate_scale / 0.1)));
    const MasterTrace trace = integrate_master(DensityMatrix::pure0(), cfg.ez, dv0, gamma,
                                               duration, dt / static_cast<double>(sub),
                                               stride * sub);
    {
        CsvWriter csv(out_path(cfg, "master_trace.csv"), {"t", "rho00", "re_rho01", "im_rho01"});
        for (std::size_t j = 0; j < trace.times.size(); ++j)
            csv.row({trace.times[j], trace.states[j].rho00, trace.states[j].rho01.real(),
                     trace.states[j].rho01.imag()});
        csv.close();
    }

    json rates;
    rates["analytic_rate"] = analytic;
    if (analytic > 0.0 && trace.times.size() >= 8) {
        const DecayFit fit = fit_decay(trace);
        rates["fitted_rate"] = fit.rate;
        rates["fitted_rate_stderr"] = fit.stderr_rate;
        rates["relative_error"] = (fit.rate - analytic) / analytic;
    } else {
        rates["fitted_rate"] = nullptr;
        rates["note"] = "no decay to fit (dV = 0 or trace too short)";
    }
    write_text_file(out_path(cfg, "rates.json"), rates.dump(2) + "\n");

    {
        // analytic Eq.-style rate across the measurement-strength axis; the
        // curve peaks at gamma_m = 2 ez and falls off in the Zeno regime
        CsvWriter csv(out_path(cfg, "gamma_sweep.csv"), {"gamma_m", "analytic_rate"});
        const double g_lo = 0.02 * cfg.ez, g_hi = 20.0 * cfg.ez;
        constexpr int n_pts = 200;
        for (int i = 0; i < n_pts; ++i) {
            const double g = g_lo * std::pow(g_hi / g_lo, static_cast<double>(i) / (n_pts - 1));
            csv.row({g, relaxation_rate(cfg.ez, g, dv0)});
        }
        csv.close();
    }

    json derived{{"duration", duration},
                 {"dv_at_start", dv0},
                 {"checkpoint_stride", stride},
                 {"master_substeps", sub},
                 {"repetitions", cfg.run.repetitions}};

    if (cfg.run.repetitions >= 2 && n_steps >= stride) {
        // selective-trajectory average against the deterministic trace
        const auto reps = static_cast<std::size_t>(cfg.run.repetitions);
        const std::size_t n_log = (n_steps - 1) / stride + 1;
        std::vector<std::vector<double>> rho(reps);
        TrajectoryParams tp{cfg.ez, 0.0, step_mode(opts)};
        parallel_for(reps, opts.jobs, [&](std::size_t r) {
            TrajectoryRecord rec =
                run_trajectory(DensityMatrix::pure0(), tp, *noise, cfg.detector, duration,
                               mix_seed(cfg.run.seed, r), 0.0, {stride});
            rho[r].reserve(rec.state_log.size());
            for (const auto& s : rec.state_log) rho[r].push_back(s.rho00);
        });
        CsvWriter csv(out_path(cfg, "ensemble_rho00.csv"),
                      {"t", "mean_rho00", "master_rho00", "deviation"});
        double max_dev = 0.0;
        for (std::size_t j = 0; j < n_log; ++j) {
            double sum = 0.0;
            for (std::size_t r = 0; r < reps; ++r) sum += rho[r][j];
            const double mean_rho = sum / static_cast<double>(reps);
            const double t = static_cast<double>(j) * static_cast<double>(stride) * dt;
            // trace.times[j] = j*stride*dt by construction for j*stride <= n_steps
            const double master_rho = trace.states[j].rho00;
            const double dev = mean_rho - master_rho;
            max_dev = std::max(max_dev, std::abs(dev));
            csv.row({t, mean_rho, master_rho, dev});
        }
        csv.close();
        derived["max_ensemble_deviation"] = max_dev;

        SvgSeries mean_s{{}, {}, "trajectory mean"}, master_s{{}, {}, "master equation"};
        for (std::size_t j = 0; j < n_log; ++j) {
            const double t = static_cast<double>(j) * static_cast<double>(stride) * dt;
            double sum = 0.0;
            for (std::size_t r = 0; r < reps; ++r) sum += rho[r][j];
            mean_s.x.push_back(t);
            mean_s.y.push_back(sum / static_cast<double>(reps));
            master_s.x.push_back(t);
            master_s.y.push_back(trace.states[j].rho00);
        }
        write_svg_quicklook(out_path(cfg, "quicklook_ensemble.svg"), {mean_s, master_s},
                            "ensemble relaxation", "t", "rho00");
    }

    write_manifest(cfg, opts, "ensemble", derived);
    return 0;
}

// ----------------------------------------------------------------- calibrate

int cmd_calibrate(const ExperimentConfig& cfg, const CliOptions& opts) {
    const auto reps = static_cast<std::size_t>(cfg.run.repetitions);
    const CalibrationParams cp = calibration_params(cfg, opts);
    std::vector<CalibrationResult> results(reps);
    parallel_for(reps, opts.jobs, [&](std::size_t r) {
        const auto noise = make_noise(cfg, mix_seed(cfg.noise.noise_seed, r));
        results[r] = run_calibration(cp, cfg.detector, *noise, mix_seed(cfg.run.seed, r));
    });

    {
        CsvWriter csv(out_path(cfg, "calibration.csv"),
                      {"repetition", "dv1", "dv2", "dv_c", "n1", "n2", "true_dv_end", "residue",
                       "predicted_sigma"});
        for (std::size_t r = 0; r < reps; ++r) {
            const auto& c = results[r];
            csv.row({static_cast<double>(r), c.dv1, c.dv2, c.dv_c, static_cast<double>(c.n1),
                     static_cast<double>(c.n2), c.true_dv_end, c.residue, c.predicted_sigma});
        }
        csv.close();
    }

    const CalibrationResult& first = results.front();
    json summary;
    summary["seed"] = mix_seed(cfg.run.seed, 0);
    summary["noise_seed"] = cfg.noise.silent() ? json() : json(mix_seed(cfg.noise.noise_seed, 0));
    summary["config"] = json::parse(config_json(cfg));
    summary["dv1"] = first.dv1;
    summary["dv2"] = first.dv2;
    summary["dv_c"] = first.dv_c;
    summary["n1"] = first.n1;
    summary["n2"] = first.n2;
    summary["predicted_sigma"] = first.predicted_sigma;
    summary["true_dv_end"] = first.true_dv_end;
    summary["residue"] = first.residue;
    write_text_file(out_path(cfg, "calibration.json"), summary.dump(2) + "\n");

    write_windowed_csv(out_path(cfg, "phase1_windowed.csv"), first.windowed1, first.bits1);
    write_windowed_csv(out_path(cfg, "phase2_windowed.csv"), first.windowed2, first.bits2);

    SvgSeries p1{{}, {}, "phase 1"}, p2{{}, {}, "phase 2"};
    for (const auto& w : first.windowed1) {
        p1.x.push_back(w.t);
        p1.y.push_back(w.i_bar);
    }
    for (const auto& w : first.windowed2) {
        p2.x.push_back(w.t);
        p2.y.push_back(w.i_bar);
    }
    write_svg_quicklook(out_path(cfg, "quicklook_phases.svg"), {p1, p2},
                        "two-phase calibration record", "t", "I_bar");

    write_manifest(cfg, opts, "calibrate",
                   {{"phase_duration", first.phase_duration},
                    {"repetitions", cfg.run.repetitions},
                    {"first_dv_c", first.dv_c}});
    return 0;
}

// ----------------------------------------------------------- sweep-bandwidth

int cmd_sweep_bandwidth(const ExperimentConfig& cfg, const CliOptions& opts) {
    if (!cfg.sweep)
        throw ConfigurationError("config: sweep-bandwidth needs a sweep section");
    SweepParams sp;
    sp.calibration = calibration_params(cfg, opts);
    sp.rms = cfg.sweep->rms;
    sp.n_components = cfg.noise.n_components;
    sp.repetitions = cfg.sweep->repetitions;
    sp.jobs = opts.jobs;
    std::vector<std::vector<double>> residues;
    const std::vector<SweepPoint> points =
        bandwidth_sweep(sp, cfg.detector, cfg.sweep->bandwidths, cfg.run.seed, &residues);

    {
        CsvWriter csv(out_path(cfg, "sweep.csv"),
                      {"band_width", "mean_sq_residue", "stderr", "repetitions"});
        for (const auto& p : points)
            csv.row({p.band_width, p.mean_sq_residue, p.stderr_msr,
                     static_cast<double>(p.repetitions)});
        csv.close();
    }
    {
        CsvWriter csv(out_path(cfg, "residues.csv"), {"band_width", "repetition", "residue"});
        for (std::size_t i = 0; i < points.size(); ++i)
            for (std::size_t r = 0; r < residues[i].size(); ++r)
                csv.row({points[i].band_width, static_cast<double>(r), residues[i][r]});
        csv.close();
    }

    SvgSeries s{{}, {}, "mean squared residue"};
    for (const auto& p : points) {
        if (p.band_width > 0.0 && p.mean_sq_residue > 0.0) {
            s.x.push_back(std::log10(p.band_width));
            s.y.push_back(std::log10(p.mean_sq_residue));
        }
    }
    write_svg_quicklook(out_path(cfg, "quicklook_sweep.svg"), {s},
                        "residue noise vs band width", "log10 B_w", "log10 <residue^2>");

    write_manifest(cfg, opts, "sweep-bandwidth",
                   {{"bandwidths", cfg.sweep->bandwidths},
                    {"repetitions_per_point", cfg.sweep->repetitions},
                    {"rms", cfg.sweep->rms}});
    return 0;
}

// ------------------------------------------------------------- gate-fidelity

int cmd_gate_fidelity(const ExperimentConfig& cfg, const CliOptions& opts) {
    if (!cfg.gates)
        throw ConfigurationError("config: gate-fidelity needs a gates section");
    const GateSpec gate = build_gate("bitflip", cfg.ez);

    FidelityCurveParams fp;
    fp.calibration = calibration_params(cfg, opts);
    fp.noise_template = cfg.noise.spec();
    fp.rms = cfg.gates->rms;
    fp.realizations = cfg.gates->realizations;
    fp.jobs = opts.jobs;
    const FidelityReport report =
        fidelity_curve(gate, cfg.gates->dv_values, fp, cfg.detector, cfg.run.seed);

    {
        CsvWriter csv(out_path(cfg, "fidelity_curve.csv"),
                      {"dv0", "F_raw_mean", "F_raw_stderr", "F_cal_mean", "F_cal_stderr"});
        for (std::size_t i = 0; i < report.noise_values.size(); ++i)
            csv.row({report.noise_values[i], report.fidelity_raw[i], report.fidelity_raw_se[i],
                     report.fidelity_calibrated[i], report.fidelity_calibrated_se[i]});
        csv.close();
    }

    SvgSeries raw{{}, {}, "raw noise"}, cal{{}, {}, "after calibration"};
    raw.x = report.noise_values;
    raw.y = report.fidelity_raw;
    cal.x = report.noise_values;
    cal.y = report.fidelity_calibrated;
    write_svg_quicklook(out_path(cfg, "quicklook_fidelity.svg"), {raw, cal},
                        "bit-flip gate fidelity", "dV(0)", "F");

    json derived{{"gate", gate.name},
                 {"gate_duration", gate.total_duration()},
                 {"realizations", cfg.gates->realizations}};

    if (!cfg.gates->schedule.empty()) {
        ScheduleParams sp;
        sp.calibration = calibration_params(cfg, opts);
        sp.noise_template = cfg.noise.spec();
        sp.rms = cfg.gates->rms;
        const ScheduleResult sched =
            alternating_schedule(cfg.gates->schedule, sp, cfg.detector,
                                 mix_seed(cfg.run.seed, 0x5ced));
        json ev = json::array();
        for (const auto& e : sched.events)
            ev.push_back({{"t", e.t}, {"qubit", e.qubit}, {"action", e.action}});
        json js;
        js["events"] = ev;
        js["segment_fidelities"] = sched.segment_fidelities;
        js["product_fidelity"] = sched.product_fidelity;
        write_text_file(out_path(cfg, "schedule.json"), js.dump(2) + "\n");
        derived["schedule_product_fidelity"] = sched.product_fidelity;
    }

    write_manifest(cfg, opts, "gate-fidelity", derived);
    return 0;
}

void add_common(CLI::App* sub, CliOptions& opts) {
    sub->add_option("--config", opts.config_path, "experiment config JSON")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", opts.seed, "override run.seed");
    sub->add_option("--jobs", opts.jobs, "worker threads for repetition fan-out");
    sub->add_option("--out", opts.out, "override run.output_dir");
    sub->add_option("--duration", opts.duration, "override the default run duration");
    sub->add_flag("--euler", opts.euler, "first-order stepping instead of the exact exponential");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"measured-qubit calibration toolkit"};
    app.require_subcommand(1);
    CliOptions opts;

    CLI::App* s_traj = app.add_subcommand("trajectory", "one selective record with pipeline views");
    CLI::App* s_ens = app.add_subcommand("ensemble", "relaxation: master equation vs trajectories");
    CLI::App* s_cal = app.add_subcommand("calibrate", "two-phase calibration runs");
    CLI::App* s_swp = app.add_subcommand("sweep-bandwidth", "residue noise across band widths");
    CLI::App* s_gate = app.add_subcommand("gate-fidelity", "raw vs calibrated gate fidelity");
    for (CLI::App* s : {s_traj, s_ens, s_cal, s_swp, s_gate}) add_common(s, opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        ExperimentConfig cfg = load_config(opts.config_path);
        if (opts.seed) cfg.run.seed = *opts.seed;
        if (opts.out) cfg.run.output_dir = *opts.out;
        if (opts.jobs == 0) opts.jobs = 1;
        if (opts.duration && *opts.duration < 0.0)
            throw ConfigurationError("cli: --duration must be >= 0");
        ensure_directory(cfg.run.output_dir);
        if (s_traj->parsed()) return cmd_trajectory(cfg, opts);
        if (s_ens->parsed()) return cmd_ensemble(cfg, opts);
        if (s_cal->parsed()) return cmd_calibrate(cfg, opts);
        if (s_swp->parsed()) return cmd_sweep_bandwidth(cfg, opts);
        return cmd_gate_fidelity(cfg, opts);
    } catch (const ConfigurationError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidParameterError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
