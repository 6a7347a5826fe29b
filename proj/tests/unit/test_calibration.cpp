#include <doctest.h>

#include <cmath>
#include <vector>

#include "qcal/calibration.hpp"
#include "qcal/errors.hpp"
#include "qcal/noise.hpp"
#include "qcal/rng.hpp"
#include "qcal/stats.hpp"

using namespace qcal;

namespace {

const DetectorConfig kFig{10.0, 10.4, 0.4, 0.05};
const CalibrationParams kParams{7.0, 2000, 0.33, StepMode::exact};

}  // namespace

TEST_SUITE("calibration") {

TEST_CASE("estimate_magnitude inverts the switching-rate formula") {
    // n = 2 dv^2 gamma T / (4 ez^2 + gamma^2)  =>  dv = sqrt(n (4 ez^2 + gamma^2) / (2 gamma T))
    const double dv = estimate_magnitude(29, 40000.0, 7.0, 0.1);
    CHECK(dv == doctest::Approx(std::sqrt(29.0 * 196.01 / 8000.0)).epsilon(1e-13));
    CHECK(dv == doctest::Approx(0.84293312).epsilon(1e-7));
    CHECK(estimate_magnitude(0, 40000.0, 7.0, 0.1) == 0.0);
    CHECK_THROWS_AS(estimate_magnitude(-1, 40000.0, 7.0, 0.1), InvalidParameterError);
    CHECK_THROWS_AS(estimate_magnitude(5, 0.0, 7.0, 0.1), InvalidParameterError);
    CHECK_THROWS_AS(estimate_magnitude(5, 40000.0, 7.0, 0.0), InvalidParameterError);
}

TEST_CASE("round trip: the expected counts reproduce the magnitude") {
    for (double dv : {0.2, 0.82, 1.5}) {
        const double t = 40000.0;
        const double n = 2.0 * dv * dv * 0.1 * t / 196.01;  // expected switchings
        const double back = estimate_magnitude(static_cast<long>(std::llround(n)), t, 7.0, 0.1);
        CHECK(back == doctest::Approx(dv).epsilon(0.05));  // integer rounding only
    }
}

TEST_CASE("combine_estimates inverts the noiseless two-phase map") {
    // phase 1 sees |v|; phase 2 sees |v - |v|/2|: v/2 for v > 0, 3|v|/2 for v < 0
    for (double v : {-2.0, -1.3, -0.5, -0.1, 0.1, 0.4, 1.1, 2.0}) {
        const double dv1 = std::abs(v);
        const double dv2 = std::abs(v - 0.5 * dv1);
        CHECK(combine_estimates(dv1, dv2) == doctest::Approx(v).epsilon(1e-12));
    }
    CHECK(combine_estimates(0.0, 0.0) == 0.0);
    // ties resolve to the positive branch
    CHECK(combine_estimates(1.0, 1.0) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK_THROWS_AS(combine_estimates(-0.1, 0.5), InvalidParameterError);
}

TEST_CASE("statistical uncertainty of the two-phase estimate") {
    CHECK(statistical_uncertainty(7.0, 0.1, 40000.0) ==
          doctest::Approx(6.1253125e-3).epsilon(1e-12));
    // sigma^2 = (4 ez^2 + gamma^2) / (8 gamma T): halves when T doubles
    CHECK(statistical_uncertainty(7.0, 0.1, 80000.0) ==
          doctest::Approx(6.1253125e-3 / 2.0).epsilon(1e-12));
    CHECK_THROWS_AS(statistical_uncertainty(7.0, 0.0, 1.0), InvalidParameterError);
}

TEST_CASE("drift variance matches a direct noise ensemble") {
    // B_w * T = 0.1 keeps the small-T expansion valid
    NoiseSpec spec{0.0, 1e-6, 20};
    spec.beta = beta_for_rms(0.8, spec.delta_omega, spec.n_components);
    const double duration = 5000.0;
    REQUIRE(drift_formula_valid(spec, duration));
    const double predicted = drift_variance(spec, duration, 1.0);
    double s2 = 0.0;
    const int reps = 4000;
    for (int r = 0; r < reps; ++r) {
        const NoiseModel m = sample_noise_model(spec, 7000 + static_cast<std::uint64_t>(r));
        const double d = m.value(duration) - m.value(0.0);
        s2 += d * d;
    }
    s2 /= reps;
    CHECK(s2 == doctest::Approx(predicted).epsilon(0.1));
}

TEST_CASE("drift formula validity boundary") {
    NoiseSpec spec{1.0, 1e-6, 20};  // band width 2e-5
    CHECK(drift_formula_valid(spec, 10000.0));   // B_w T = 0.2
    CHECK_FALSE(drift_formula_valid(spec, 20000.0));  // B_w T = 0.4
}

TEST_CASE("optimal_time matches the numeric minimum of the error budget") {
    NoiseSpec spec{0.0, 1e-6, 20};
    spec.beta = beta_for_rms(0.8, spec.delta_omega, spec.n_components);
    const double ez = 7.0, gamma = 0.1;
    const double t_star = optimal_time(ez, gamma, spec, 1.0);
    auto budget = [&](double t) {
        return statistical_uncertainty(ez, gamma, t) + drift_variance(spec, t, 1.0);
    };
    const double t_num = golden_section_minimize(budget, t_star * 0.01, t_star * 100.0, 1e-9);
    CHECK(t_star == doctest::Approx(t_num).epsilon(1e-3));
    CHECK(budget(t_star * 0.5) > budget(t_star));
    CHECK(budget(t_star * 2.0) > budget(t_star));
}

TEST_CASE("dephasing reduction factor is the fourth power of the residue ratio") {
    const double f = dephasing_reduction_factor(0.73, 0.87, 0.82);
    CHECK(f == doctest::Approx(std::pow(0.14 / 0.82, 4)).epsilon(1e-12));
    CHECK(f == doctest::Approx(8.5e-4).epsilon(0.01));
    CHECK(dephasing_reduction_factor(0.87, 0.87, 0.82) == 0.0);
    CHECK_THROWS_AS(dephasing_reduction_factor(0.7, 0.9, 0.0), InvalidParameterError);
}

TEST_CASE("a silent line calibrates to exactly zero") {
    ConstantNoise silent(0.0);
    const CalibrationResult cal = run_calibration(kParams, kFig, silent, 8);
    CHECK(cal.n1 == 0);
    CHECK(cal.n2 == 0);
    CHECK(cal.dv1 == 0.0);
    CHECK(cal.dv2 == 0.0);
    CHECK(cal.dv_c == 0.0);
    CHECK(cal.true_dv_end == 0.0);
    CHECK(cal.residue == 0.0);
    CHECK(cal.phase_duration == doctest::Approx(40000.0).epsilon(1e-12));
    CHECK(cal.predicted_sigma == doctest::Approx(std::sqrt(6.1253125e-3)).epsilon(1e-12));
}

TEST_CASE("a constant offset line is recovered within the statistical error") {
    ConstantNoise line(0.82);
    const CalibrationResult cal = run_calibration(kParams, kFig, line, 123);
    CHECK(cal.phase_duration == doctest::Approx(40000.0).epsilon(1e-12));
    REQUIRE(cal.windowed1.size() == 2000);
    REQUIRE(cal.windowed2.size() == 2000);
    REQUIRE(cal.bits1.size() == 2000);
    CHECK(cal.n1 > 5);
    CHECK(cal.n1 < 70);
    CHECK(cal.dv1 == doctest::Approx(estimate_magnitude(cal.n1, 40000.0, 7.0, 0.1)).epsilon(1e-12));
    CHECK(cal.true_dv_end == 0.82);
    CHECK(cal.residue == doctest::Approx(cal.dv_c - 0.82).epsilon(1e-12));
    // one run lands within a handful of predicted sigmas essentially always
    CHECK(std::abs(cal.residue) < 10.0 * cal.predicted_sigma);
}

TEST_CASE("calibration runs are deterministic in the seed") {
    ConstantNoise line(0.82);
    const CalibrationResult a = run_calibration(kParams, kFig, line, 5);
    const CalibrationResult b = run_calibration(kParams, kFig, line, 5);
    const CalibrationResult c = run_calibration(kParams, kFig, line, 6);
    CHECK(a.dv_c == b.dv_c);
    CHECK(a.n1 == b.n1);
    CHECK(a.n2 == b.n2);
    CHECK((a.n1 != c.n1 || a.n2 != c.n2 || a.dv_c != c.dv_c));
}

TEST_CASE("bandwidth_sweep validates its inputs") {
    SweepParams sp;
    sp.calibration = kParams;
    sp.repetitions = 19;
    std::vector<double> bws{1e-5};
    CHECK_THROWS_AS(bandwidth_sweep(sp, kFig, bws, 1), InvalidParameterError);
    sp.repetitions = 20;
    std::vector<double> empty;
    CHECK_THROWS_AS(bandwidth_sweep(sp, kFig, empty, 1), InvalidParameterError);
    std::vector<double> bad{1e-5, 0.0};
    CHECK_THROWS_AS(bandwidth_sweep(sp, kFig, bad, 1), InvalidParameterError);
}

}  // TEST_SUITE
