#include <doctest.h>

#include <cmath>
#include <complex>

#include "qcal/errors.hpp"
#include "qcal/mat2.hpp"
#include "qcal/qubit.hpp"

using namespace qcal;

namespace {

double rho00_after_exact_step(double ez, double v, double dt) {
    // closed form for one step from |0>: 1 - (v/Omega)^2 sin^2(Omega dt)
    const double omega = std::hypot(ez, v);
    const double s = std::sin(omega * dt) * v / omega;
    return 1.0 - s * s;
}

}  // namespace

TEST_SUITE("qubit") {

TEST_CASE("from_pure builds the projector") {
    const DensityMatrix r = DensityMatrix::from_pure(Vec2{cplx(0.6), cplx(0.8)});
    CHECK(r.rho00 == doctest::Approx(0.36).epsilon(1e-14));
    CHECK(r.rho01.real() == doctest::Approx(0.48).epsilon(1e-14));
    CHECK(r.rho01.imag() == doctest::Approx(0.0).epsilon(1e-14));

    const DensityMatrix ri = DensityMatrix::from_pure(Vec2{cplx(0.6), cplx(0.0, 0.8)});
    CHECK(ri.rho01.real() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(ri.rho01.imag() == doctest::Approx(-0.48).epsilon(1e-14));
}

TEST_CASE("purity distinguishes pure and mixed states") {
    CHECK(purity(DensityMatrix::pure0()) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(purity(DensityMatrix::pure1()) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(purity(DensityMatrix::maximally_mixed()) == doctest::Approx(0.5).epsilon(1e-15));
    DensityMatrix r;
    r.rho00 = 0.5;
    r.rho01 = cplx(0.3, 0.0);
    CHECK(purity(r) == doctest::Approx(0.68).epsilon(1e-14));
}

TEST_CASE("density_matrix_valid enforces the Bloch ball") {
    CHECK(density_matrix_valid(DensityMatrix::pure0()));
    CHECK(density_matrix_valid(DensityMatrix::maximally_mixed()));
    DensityMatrix boundary;
    boundary.rho00 = 0.5;
    boundary.rho01 = cplx(0.5, 0.0);  // |q|^2 == p(1-p), pure equator state
    CHECK(density_matrix_valid(boundary));

    DensityMatrix bad = boundary;
    bad.rho01 = cplx(0.51, 0.0);
    CHECK_FALSE(density_matrix_valid(bad));
    DensityMatrix oob;
    oob.rho00 = 1.2;
    CHECK_FALSE(density_matrix_valid(oob));
    DensityMatrix nan_state;
    nan_state.rho00 = std::nan("");
    CHECK_FALSE(density_matrix_valid(nan_state));
}

TEST_CASE("make_hamiltonian adds the control shift and rejects non-finite input") {
    const QubitHamiltonian h = make_hamiltonian(7.0, 0.82, -0.41);
    CHECK(h.ez == 7.0);
    CHECK(h.off_diag == doctest::Approx(0.41).epsilon(1e-15));
    CHECK_THROWS_AS(make_hamiltonian(std::nan(""), 0.0, 0.0), InvalidParameterError);
    CHECK_THROWS_AS(make_hamiltonian(7.0, std::numeric_limits<double>::infinity(), 0.0),
                    InvalidParameterError);
}

TEST_CASE("one exact step from the ground state matches the closed form") {
    const QubitHamiltonian h = make_hamiltonian(7.0, 0.82, 0.0);
    const DensityMatrix out = evolve_unitary(DensityMatrix::pure0(), h, 0.01);
    CHECK(out.rho00 == doctest::Approx(rho00_after_exact_step(7.0, 0.82, 0.01)).epsilon(1e-13));
    // frozen value, guards against silent changes of the propagator
    CHECK(out.rho00 == doctest::Approx(0.99993287125869679).epsilon(1e-12));
}

TEST_CASE("exact stepping preserves trace, purity and validity over long runs") {
    const QubitHamiltonian h = make_hamiltonian(7.0, 0.82, 0.0);
    DensityMatrix r = DensityMatrix::from_pure(Vec2{cplx(0.6), cplx(0.0, 0.8)});
    for (int k = 0; k < 1000000; ++k) r = evolve_unitary(r, h, 0.05);
    CHECK(std::abs(purity(r) - 1.0) < 1e-9);
    CHECK(density_matrix_valid(r, 1e-8));
}

TEST_CASE("coherence phase precesses at 2 Ez when the drive is weak") {
    // v -> 0: rho01(t) ~ rho01(0) exp(2i Ez t); a propagator that conjugates
    // the wrong factor freezes this phase and breaks the telegraph physics.
    const double ez = 3.0, dt = 0.001;
    const QubitHamiltonian h = make_hamiltonian(ez, 1e-8, 0.0);
    DensityMatrix r;
    r.rho00 = 0.5;
    r.rho01 = cplx(0.4, 0.0);
    const int n = 500;
    for (int k = 0; k < n; ++k) r = evolve_unitary(r, h, dt);
    const double expected_phase = 2.0 * ez * n * dt;
    const double got_phase = std::arg(r.rho01);
    CHECK(std::remainder(got_phase - expected_phase, 2.0 * M_PI) ==
          doctest::Approx(0.0).epsilon(1e-6));
    CHECK(std::abs(r.rho01) == doctest::Approx(0.4).epsilon(1e-9));
}

TEST_CASE("step guard rejects dt beyond half a radian of rotation") {
    const QubitHamiltonian h = make_hamiltonian(7.0, 0.82, 0.0);  // |H| ~ 7.048
    CHECK_THROWS_AS(evolve_unitary(DensityMatrix::pure0(), h, 0.08), ConfigurationError);
    CHECK_NOTHROW(evolve_unitary(DensityMatrix::pure0(), h, 0.07));
    CHECK_THROWS_AS(evolve_euler(DensityMatrix::pure0(), h, 0.08), ConfigurationError);
}

TEST_CASE("euler step converges to the exact step at first order per step") {
    const QubitHamiltonian h = make_hamiltonian(7.0, 0.82, 0.0);
    const DensityMatrix r0 = DensityMatrix::from_pure(Vec2{cplx(0.6), cplx(0.8)});
    auto one_step_err = [&](double dt) {
        const DensityMatrix a = evolve_euler(r0, h, dt);
        const DensityMatrix b = evolve_unitary(r0, h, dt);
        return std::abs(a.rho00 - b.rho00) + std::abs(a.rho01 - b.rho01);
    };
    const double e1 = one_step_err(0.004);
    const double e2 = one_step_err(0.002);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.15));  // local error is O(dt^2)
}

TEST_CASE("evolve dispatches on the step mode") {
    const QubitHamiltonian h = make_hamiltonian(2.0, 0.3, 0.0);
    const DensityMatrix r0 = DensityMatrix::maximally_mixed();
    DensityMatrix r1 = r0;
    r1.rho01 = cplx(0.2, -0.1);
    const DensityMatrix ex = evolve(r1, h, 0.01, StepMode::exact);
    const DensityMatrix eu = evolve(r1, h, 0.01, StepMode::euler);
    CHECK(ex.rho00 == evolve_unitary(r1, h, 0.01).rho00);
    CHECK(eu.rho00 == evolve_euler(r1, h, 0.01).rho00);
    CHECK(ex.rho00 != eu.rho00);
}

TEST_CASE("hamiltonian_exponential is unitary and drives full Rabi flips") {
    const QubitHamiltonian h = make_hamiltonian(3.0, 0.5, 0.0);
    const Mat2 u = hamiltonian_exponential(h, 0.37);
    const Mat2 uu = u * u.adjoint();
    CHECK(std::abs(uu.a - cplx(1.0)) < 1e-14);
    CHECK(std::abs(uu.d - cplx(1.0)) < 1e-14);
    CHECK(std::abs(uu.b) < 1e-14);
    CHECK(std::abs(uu.c) < 1e-14);

    // ez = 0: exp(-i v t sigma_x); at t = pi/(2v) this is -i sigma_x
    const QubitHamiltonian hx = make_hamiltonian(0.0, 1.0, 0.0);
    const Mat2 flip = hamiltonian_exponential(hx, M_PI / 2.0);
    const Mat2 target{cplx(0.0), cplx(0.0, -1.0), cplx(0.0, -1.0), cplx(0.0)};
    CHECK(phase_quotient_distance(flip, target) < 1e-14);
    const Vec2 up = flip * Vec2{cplx(1.0), cplx(0.0)};
    CHECK(std::norm(up.v) == doctest::Approx(1.0).epsilon(1e-14));
}

}  // TEST_SUITE
