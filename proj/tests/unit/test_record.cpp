#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "qcal/detector.hpp"
#include "qcal/errors.hpp"
#include "qcal/record.hpp"
#include "qcal/rng.hpp"

using namespace qcal;

namespace {

const DetectorConfig kFig{10.0, 10.4, 0.4, 0.05};  // gamma_m = 0.1, window = 400 samples

}  // namespace

TEST_SUITE("record") {

TEST_CASE("window_average takes non-overlapping block means on the 2/gamma grid") {
    std::vector<double> raw(1000);
    for (std::size_t k = 0; k < raw.size(); ++k) raw[k] = static_cast<double>(k);
    const auto w = window_average(raw, kFig.dt, kFig.gamma_m(), 7.0);
    // 400 samples per window; the trailing partial block of 200 is dropped
    REQUIRE(w.size() == 2);
    CHECK(w[0].i_bar == doctest::Approx(199.5).epsilon(1e-12));
    CHECK(w[1].i_bar == doctest::Approx(599.5).epsilon(1e-12));
    CHECK(w[0].t == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(w[1].t - w[0].t == doctest::Approx(400 * kFig.dt).epsilon(1e-9));
}

TEST_CASE("window_average refuses under-resolved windows") {
    std::vector<double> raw(100, 0.0);
    // gamma_m = 10 -> window of 2/10/0.05 = 4 samples, too coarse to average
    CHECK_THROWS_AS(window_average(raw, 0.05, 10.0, 0.0), ConfigurationError);
}

TEST_CASE("windowed noise std is sqrt(S_I gamma_m / 4)") {
    Rng rng(401);
    const std::size_t n_windows = 2000, wlen = 400;
    std::vector<double> raw(n_windows * wlen);
    const double sigma = kFig.sample_sigma();
    for (auto& v : raw) v = 10.0 + sigma * rng.normal();
    const auto w = window_average(raw, kFig.dt, kFig.gamma_m(), 0.0);
    REQUIRE(w.size() == n_windows);
    double s = 0.0, s2 = 0.0;
    for (const auto& x : w) {
        s += x.i_bar;
        s2 += x.i_bar * x.i_bar;
    }
    const double m = s / static_cast<double>(n_windows);
    const double sd = std::sqrt(s2 / static_cast<double>(n_windows) - m * m);
    CHECK(sd == doctest::Approx(0.1).epsilon(0.05));
}

TEST_CASE("binarize picks the initial bit from the nearest level") {
    std::vector<WindowSample> near0{{0.0, 10.05}};
    std::vector<WindowSample> near1{{0.0, 10.35}};
    CHECK(binarize(near0, kFig, 0.33) == std::vector<std::uint8_t>{0});
    CHECK(binarize(near1, kFig, 0.33) == std::vector<std::uint8_t>{1});
}

TEST_CASE("binarize applies hysteresis around the midpoint") {
    const double h = 0.25;  // thresholds at 10.2 +- 0.1
    std::vector<WindowSample> w;
    const std::vector<double> vals{10.0, 10.25, 10.31, 10.25, 10.09, 10.15, 10.0};
    for (std::size_t i = 0; i < vals.size(); ++i)
        w.push_back({static_cast<double>(i), vals[i]});
    const auto bits = binarize(w, kFig, h);
    // 10.25 sits between the thresholds: hold; 10.31 crosses up; holds until
    // 10.09 crosses back down
    CHECK((bits == std::vector<std::uint8_t>{0, 0, 1, 1, 0, 0, 0}));
}

TEST_CASE("binarize rejects out-of-range hysteresis") {
    std::vector<WindowSample> w{{0.0, 10.0}};
    CHECK_THROWS_AS(binarize(w, kFig, 0.5), InvalidParameterError);
    CHECK_THROWS_AS(binarize(w, kFig, -0.1), InvalidParameterError);
    CHECK_NOTHROW(binarize(w, kFig, 0.49));
    CHECK_NOTHROW(binarize(w, kFig, 0.0));
}

TEST_CASE("binarize handles swapped level order") {
    DetectorConfig swapped{10.4, 10.0, 0.4, 0.05};  // i0 above i1
    std::vector<WindowSample> w{{0.0, 10.38}, {1.0, 10.02}, {2.0, 10.39}};
    const auto bits = binarize(w, swapped, 0.33);
    // bit = 1 means "near i1": here i1 is the low level
    CHECK((bits == std::vector<std::uint8_t>{0, 1, 0}));
}

TEST_CASE("count_switchings counts bit flips and records their times") {
    std::vector<std::uint8_t> bits{0, 0, 1, 1, 1, 0, 1};
    std::vector<WindowSample> w;
    for (std::size_t i = 0; i < bits.size(); ++i)
        w.push_back({10.0 + static_cast<double>(i), 0.0});
    const auto [n, times] = count_switchings(bits, w);
    CHECK(n == 3);
    REQUIRE(times.size() == 3);
    CHECK(times[0] == doctest::Approx(12.0));
    CHECK(times[1] == doctest::Approx(15.0));
    CHECK(times[2] == doctest::Approx(16.0));
}

TEST_CASE("count_switchings on a flat record is zero") {
    std::vector<std::uint8_t> bits(50, 1);
    std::vector<WindowSample> w(50);
    CHECK(count_switchings(bits, w).first == 0);
}

TEST_CASE("apply_pipeline equals the manual chain") {
    Rng rng(55);
    TrajectoryRecord rec;
    rec.dt = kFig.dt;
    rec.t0 = 3.0;
    rec.raw.resize(4000);
    const double sigma = kFig.sample_sigma();
    for (std::size_t k = 0; k < rec.raw.size(); ++k) {
        const double level = (k / 400) % 2 == 0 ? kFig.i0 : kFig.i1;
        rec.raw[k] = level + sigma * rng.normal();
    }
    apply_pipeline(rec, kFig, 0.33);
    const auto w = window_average(rec.raw, rec.dt, kFig.gamma_m(), rec.t0);
    const auto bits = binarize(w, kFig, 0.33);
    const auto [n, times] = count_switchings(bits, w);
    REQUIRE(rec.windowed.size() == w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        CHECK(rec.windowed[i].i_bar == w[i].i_bar);
        CHECK(rec.bits[i] == bits[i]);
    }
    CHECK(static_cast<long>(rec.switch_times.size()) == n);
    // the constructed record alternates levels every window
    CHECK(n >= 7);
}

}  // TEST_SUITE
