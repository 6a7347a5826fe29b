// End-to-end checks of the installed command-line driver: exit codes, output
// files, manifests, and bit-level reproducibility. Each case gets a fresh
// directory under the system temp root and drives the real binary.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kBin = QCAL_BIN;

int run_cli(const std::string& args) {
    const std::string cmd = kBin + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

int run_cli_capture(const std::string& args, const std::string& err_file) {
    const std::string cmd = kBin + " " + args + " >/dev/null 2>" + err_file;
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

fs::path fresh_dir(const std::string& tag) {
    const fs::path p = fs::temp_directory_path() / ("qcal_cli_" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    REQUIRE(bool(out));
    out << content;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(bool(in));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t line_count(const fs::path& path) {
    const std::string s = slurp(path);
    std::size_t n = 0;
    for (char c : s)
        if (c == '\n') ++n;
    return n;
}

json load_json(const fs::path& path) { return json::parse(slurp(path)); }

// silent control line: every trajectory is a deterministic detector record
const char* kSilentConfig = R"({
  "ez": 7.0,
  "detector": {"i0": 10.0, "i1": 10.4, "s_i": 0.4, "dt": 0.05},
  "noise": {"rms": 0.0, "delta_omega": 1e-6, "n_components": 20}
})";

fs::path silent_config(const fs::path& dir) {
    const fs::path p = dir / "config.json";
    write_file(p, kSilentConfig);
    return p;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("trajectory writes the full record set") {
    const auto dir = fresh_dir("traj");
    const auto cfg = silent_config(dir);
    const auto out = dir / "out";
    const int rc = run_cli("trajectory --config " + cfg.string() + " --duration 400 --seed 3 --out " +
                           out.string());
    CHECK(rc == 0);
    for (const char* name : {"manifest.json", "raw.csv", "state.csv", "windowed.csv", "events.csv",
                             "quicklook_current.svg", "quicklook_rho00.svg"})
        CHECK(fs::exists(out / name));

    // 8000 samples at dt = 0.05, plus the header
    CHECK(line_count(out / "raw.csv") == 8001);
    // state log every 2/gamma_m = 20 time units
    CHECK(line_count(out / "state.csv") == 21);
    CHECK(line_count(out / "windowed.csv") == 21);
    CHECK(slurp(out / "raw.csv").rfind("t,I_raw\n", 0) == 0);

    // silent drive from the ground state: the qubit never moves
    std::ifstream st(out / "state.csv");
    std::string line;
    std::getline(st, line);
    CHECK(line == "t,rho00,re_rho01,im_rho01,dV_true");
    while (std::getline(st, line)) {
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        CHECK(line.substr(c1 + 1, c2 - c1 - 1) == "1");
        CHECK(line.substr(line.rfind(',') + 1) == "0");
    }

    const json m = load_json(out / "manifest.json");
    CHECK(m.at("command") == "trajectory");
    CHECK(m.at("config").at("run").at("seed") == 3);
    CHECK(m.at("derived").at("n_steps") == 8000);
    CHECK(m.at("derived").at("n_windows") == 20);
    CHECK(m.at("derived").at("dv_at_start") == 0.0);
    CHECK(m.at("derived").at("gamma_m") == doctest::Approx(0.1));
    CHECK(m.at("effective").at("duration_override") == 400.0);
    fs::remove_all(dir);
}

TEST_CASE("same seed reproduces the record bit for bit") {
    const auto dir = fresh_dir("repro");
    const auto cfg = silent_config(dir);
    const std::string base = "trajectory --config " + cfg.string() + " --duration 100 ";
    REQUIRE(run_cli(base + "--seed 9 --out " + (dir / "a").string()) == 0);
    REQUIRE(run_cli(base + "--seed 9 --out " + (dir / "b").string()) == 0);
    REQUIRE(run_cli(base + "--seed 10 --out " + (dir / "c").string()) == 0);
    CHECK(slurp(dir / "a" / "raw.csv") == slurp(dir / "b" / "raw.csv"));
    CHECK(slurp(dir / "a" / "windowed.csv") == slurp(dir / "b" / "windowed.csv"));
    CHECK(slurp(dir / "a" / "events.csv") == slurp(dir / "b" / "events.csv"));
    CHECK(slurp(dir / "a" / "raw.csv") != slurp(dir / "c" / "raw.csv"));
    // manifests agree except for the directory each run actually wrote to
    json ma = load_json(dir / "a" / "manifest.json");
    json mb = load_json(dir / "b" / "manifest.json");
    ma.at("config").at("run").erase("output_dir");
    mb.at("config").at("run").erase("output_dir");
    CHECK(ma == mb);
    fs::remove_all(dir);
}

TEST_CASE("zero duration yields headers only") {
    const auto dir = fresh_dir("zero");
    const auto cfg = silent_config(dir);
    const auto out = dir / "out";
    CHECK(run_cli("trajectory --config " + cfg.string() + " --duration 0 --out " + out.string()) ==
          0);
    CHECK(slurp(out / "raw.csv") == "t,I_raw\n");
    CHECK(slurp(out / "windowed.csv") == "t,I_bar,bit\n");
    CHECK(slurp(out / "events.csv") == "event,t\n");
    fs::remove_all(dir);
}

TEST_CASE("config problems exit with code 2") {
    const auto dir = fresh_dir("cfgerr");
    const auto bad = dir / "bad.json";
    write_file(bad, R"({
      "ez": 7.0,
      "detector": {"i0": 10.0, "i1": 10.4, "s_i": 0.4, "dt": 0.05, "gain": 2.0},
      "noise": {"rms": 0.0, "delta_omega": 1e-6, "n_components": 20}
    })");
    const auto err = dir / "err.txt";
    CHECK(run_cli_capture("trajectory --config " + bad.string() + " --out " + (dir / "o").string(),
                          err.string()) == 2);
    CHECK(slurp(err).find("$.detector.gain") != std::string::npos);

    write_file(dir / "mangled.json", "{ not json");
    CHECK(run_cli("trajectory --config " + (dir / "mangled.json").string()) == 2);
    CHECK(run_cli("trajectory --config " + (dir / "does_not_exist.json").string()) == 2);
    fs::remove_all(dir);
}

TEST_CASE("subcommands demand their config sections") {
    const auto dir = fresh_dir("sections");
    const auto cfg = silent_config(dir);
    CHECK(run_cli("sweep-bandwidth --config " + cfg.string() + " --out " + (dir / "s").string()) ==
          2);
    CHECK(run_cli("gate-fidelity --config " + cfg.string() + " --out " + (dir / "g").string()) ==
          2);
    fs::remove_all(dir);
}

TEST_CASE("argument parsing failures exit with code 2, help with 0") {
    const auto dir = fresh_dir("args");
    const auto cfg = silent_config(dir);
    CHECK(run_cli("trajectory --config " + cfg.string() + " --bogus-flag") == 2);
    CHECK(run_cli("") == 2);              // a subcommand is required
    CHECK(run_cli("trajectory") == 2);    // --config is required
    CHECK(run_cli("--help") == 0);
    fs::remove_all(dir);
}

TEST_CASE("calibrate on a silent line reports an exact null result") {
    const auto dir = fresh_dir("cal");
    const auto cfg = silent_config(dir);
    const auto out = dir / "out";
    // seed chosen so no detector-noise window crosses the hysteresis band
    CHECK(run_cli("calibrate --config " + cfg.string() + " --seed 5 --out " + out.string()) == 0);

    const json s = load_json(out / "calibration.json");
    CHECK(s.at("dv1") == 0.0);
    CHECK(s.at("dv2") == 0.0);
    CHECK(s.at("dv_c") == 0.0);
    CHECK(s.at("n1") == 0);
    CHECK(s.at("n2") == 0);
    CHECK(s.at("true_dv_end") == 0.0);
    CHECK(s.at("residue") == 0.0);
    CHECK(s.at("noise_seed").is_null());
    CHECK(s.at("predicted_sigma").get<double>() ==
          doctest::Approx(std::sqrt(6.1253125e-3)).epsilon(1e-12));

    // each phase holds 2000 windows of 400 samples
    CHECK(line_count(out / "phase1_windowed.csv") == 2001);
    CHECK(line_count(out / "phase2_windowed.csv") == 2001);
    // phase duration is 2 n_p / gamma_m; gamma_m carries the rounding of i1 - i0
    CHECK(load_json(out / "manifest.json").at("derived").at("phase_duration").get<double>() ==
          doctest::Approx(40000.0).epsilon(1e-12));
    CHECK(fs::exists(out / "calibration.csv"));
    CHECK(fs::exists(out / "quicklook_phases.svg"));
    fs::remove_all(dir);
}

TEST_CASE("ensemble on a silent line matches the motionless master solution") {
    const auto dir = fresh_dir("ens");
    const auto cfg = silent_config(dir);
    const auto out = dir / "out";
    const std::string extra = R"(,
  "run": {"repetitions": 3})";
    // splice a run section into the silent config
    std::string body = kSilentConfig;
    body.insert(body.rfind('}'), extra);
    write_file(dir / "config3.json", body);
    CHECK(run_cli("ensemble --config " + (dir / "config3.json").string() +
                  " --duration 400 --seed 2 --jobs 2 --out " + out.string()) == 0);

    const json r = load_json(out / "rates.json");
    CHECK(r.at("analytic_rate") == 0.0);
    CHECK(r.at("fitted_rate").is_null());
    CHECK(r.contains("note"));

    // ground state is an exact fixed point on both sides of the comparison
    std::ifstream in(out / "ensemble_rho00.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,mean_rho00,master_rho00,deviation");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        const double dev = std::strtod(line.substr(line.rfind(',') + 1).c_str(), nullptr);
        CHECK(std::abs(dev) < 1e-12);
    }
    CHECK(rows == 20);

    const json m = load_json(out / "manifest.json");
    CHECK(m.at("derived").at("checkpoint_stride") == 400);
    CHECK(m.at("derived").at("master_substeps") == 7);
    CHECK(fs::exists(out / "master_trace.csv"));
    CHECK(fs::exists(out / "gamma_sweep.csv"));
    CHECK(fs::exists(out / "quicklook_ensemble.svg"));
    fs::remove_all(dir);
}

TEST_CASE("a trace too short to pin a decay exits with code 3") {
    const auto dir = fresh_dir("fitfail");
    write_file(dir / "config.json", R"({
      "ez": 7.0,
      "detector": {"i0": 10.0, "i1": 10.4, "s_i": 0.4, "dt": 0.05},
      "noise": {"rms": 0.1, "delta_omega": 1e-6, "n_components": 20, "noise_seed": 4}
    })");
    // dV(0) of order 0.1 puts the decay time near 5e4, far beyond the
    // 400-unit trace; the fit must refuse rather than extrapolate
    CHECK(run_cli("ensemble --config " + (dir / "config.json").string() +
                  " --duration 400 --out " + (dir / "out").string()) == 3);
    fs::remove_all(dir);
}

TEST_CASE("gate-fidelity writes the curve and the alternating schedule") {
    const auto dir = fresh_dir("gates");
    write_file(dir / "config.json", R"({
      "ez": 7.0,
      "detector": {"i0": 10.0, "i1": 10.4, "s_i": 0.4, "dt": 0.05},
      "noise": {"rms": 0.8, "delta_omega": 1e-6, "n_components": 20, "noise_seed": 2},
      "gates": {"dv_values": [0.0], "realizations": 1, "rms": 0.6, "schedule": ["hadamard"]}
    })");
    const auto out = dir / "out";
    CHECK(run_cli("gate-fidelity --config " + (dir / "config.json").string() + " --seed 11 --out " +
                  out.string()) == 0);

    std::ifstream in(out / "fidelity_curve.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "dv0,F_raw_mean,F_raw_stderr,F_cal_mean,F_cal_stderr");
    REQUIRE(bool(std::getline(in, line)));
    std::vector<double> vals;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) vals.push_back(std::strtod(cell.c_str(), nullptr));
    REQUIRE(vals.size() == 5);
    CHECK(vals[0] == 0.0);
    // a perfectly tuned cell is exact by construction, before and after
    CHECK(vals[1] == 1.0);
    CHECK(vals[2] == 0.0);
    CHECK(vals[3] == 1.0);
    CHECK(vals[4] == 0.0);

    const json sched = load_json(out / "schedule.json");
    REQUIRE(sched.at("events").size() == 2);
    CHECK(sched.at("events")[0].at("action") == "calibrate");
    CHECK(sched.at("events")[0].at("t") == 0.0);
    CHECK(sched.at("events")[0].at("qubit") == 1);
    CHECK(sched.at("events")[1].at("action") == "hadamard");
    const double pf = sched.at("product_fidelity").get<double>();
    CHECK(pf > 0.0);
    CHECK(pf <= 1.0);
    CHECK(fs::exists(out / "quicklook_fidelity.svg"));
    fs::remove_all(dir);
}

TEST_CASE("first-order stepping is accepted and stays physical") {
    const auto dir = fresh_dir("euler");
    const auto cfg = silent_config(dir);
    const auto out = dir / "out";
    CHECK(run_cli("trajectory --config " + cfg.string() + " --euler --duration 50 --out " +
                  out.string()) == 0);
    std::ifstream st(out / "state.csv");
    std::string line;
    std::getline(st, line);
    while (std::getline(st, line)) {
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        const double rho00 = std::strtod(line.substr(c1 + 1, c2 - c1 - 1).c_str(), nullptr);
        CHECK(rho00 == doctest::Approx(1.0).epsilon(1e-9));
    }
    fs::remove_all(dir);
}

TEST_CASE("--out overrides the configured output directory") {
    const auto dir = fresh_dir("outdir");
    std::string body = kSilentConfig;
    body.insert(body.rfind('}'), ",\n  \"run\": {\"output_dir\": \"" +
                                     (dir / "from_config").string() + "\"}");
    write_file(dir / "config.json", body);
    CHECK(run_cli("trajectory --config " + (dir / "config.json").string() +
                  " --duration 0 --out " + (dir / "cli_out").string()) == 0);
    CHECK(fs::exists(dir / "cli_out" / "manifest.json"));
    CHECK_FALSE(fs::exists(dir / "from_config"));
    fs::remove_all(dir);
}

}  // TEST_SUITE
