#pragma once

#include "qcal/mat2.hpp"

namespace qcal {

// Two-level state as (rho00, rho01); rho11 = 1 - rho00 is derived, never
// stored, so the trace cannot drift between redundant fields.
struct DensityMatrix {
    double rho00 = 1.0;
    cplx rho01{};

    double rho11() const { return 1.0 - rho00; }

    static DensityMatrix pure0() { return {1.0, {}}; }
    static DensityMatrix pure1() { return {0.0, {}}; }
    static DensityMatrix maximally_mixed() { return {0.5, {}}; }

    // |psi><psi| for amplitudes (u, v)
    static DensityMatrix from_pure(const Vec2& psi);

    Mat2 as_matrix() const {
        return {cplx(rho00), rho01, std::conj(rho01), cplx(rho11())};
    }
};

// Tr(rho^2) in [1/2, 1]; 1 iff pure.
double purity(const DensityMatrix& rho);

// Positivity/trace sanity: rho00 in [0,1] and |rho01|^2 <= rho00*rho11
// within tol. Used by tests and integrator checks.
bool density_matrix_valid(const DensityMatrix& rho, double tol = 1e-9);

// H = [[-ez, off_diag], [off_diag, ez]]; ez is half the level splitting,
// off_diag carries noise plus any control shift.
struct QubitHamiltonian {
    double ez = 0.0;
    double off_diag = 0.0;
};

// off_diag = dv + shift. Throws InvalidParameterError on non-finite input.
QubitHamiltonian make_hamiltonian(double ez, double dv, double shift);

enum class StepMode {
    exact,  // rho' = U rho U^dag with U = exp(-i H dt)
    euler,  // rho' = rho - i [H, rho] dt, the literal first-order update
};

// One exact step. Guard: dt > 0 and dt * ||H|| <= 0.5 (spectral norm
// sqrt(ez^2 + off_diag^2)); violations throw ConfigurationError.
DensityMatrix evolve_unitary(const DensityMatrix& rho, const QubitHamiltonian& h, double dt);

// First-order mode, same guard. Kept so results can be compared against the
// plain Euler update; the commutator is traceless so the trace is exact, but
// purity drifts O(dt^2) per step.
DensityMatrix evolve_euler(const DensityMatrix& rho, const QubitHamiltonian& h, double dt);

inline DensityMatrix evolve(const DensityMatrix& rho, const QubitHamiltonian& h, double dt,
                            StepMode mode) {
    return mode == StepMode::exact ? evolve_unitary(rho, h, dt) : evolve_euler(rho, h, dt);
}

// U = exp(-i H t) entries: closed form for the traceless real symmetric H.
Mat2 hamiltonian_exponential(const QubitHamiltonian& h, double t);

}  // namespace qcal
