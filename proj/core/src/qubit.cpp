#include "qcal/qubit.hpp"

#include <cmath>

#include "qcal/errors.hpp"

namespace qcal {

DensityMatrix DensityMatrix::from_pure(const Vec2& psi) {
    const Vec2 n = psi.normalized();
    return {std::norm(n.u), n.u * std::conj(n.v)};
}

double purity(const DensityMatrix& rho) {
    const double p = rho.rho00;
    return p * p + (1.0 - p) * (1.0 - p) + 2.0 * std::norm(rho.rho01);
}

bool density_matrix_valid(const DensityMatrix& rho, double tol) {
    if (!std::isfinite(rho.rho00) || !std::isfinite(rho.rho01.real()) ||
        !std::isfinite(rho.rho01.imag()))
        return false;
    if (rho.rho00 < -tol || rho.rho00 > 1.0 + tol) return false;
    return std::norm(rho.rho01) <= rho.rho00 * rho.rho11() + tol;
}

QubitHamiltonian make_hamiltonian(double ez, double dv, double shift) {
    if (!std::isfinite(ez) || !std::isfinite(dv) || !std::isfinite(shift))
        throw InvalidParameterError("make_hamiltonian: non-finite parameter");
    return {ez, dv + shift};
}

namespace {

void check_step(const QubitHamiltonian& h, double dt) {
    if (!(dt > 0.0)) throw ConfigurationError("evolve: dt must be positive");
    const double norm = std::hypot(h.ez, h.off_diag);
    if (dt * norm > 0.5)
        throw ConfigurationError("evolve: dt * ||H|| = " + std::to_string(dt * norm) +
                                 " exceeds the 0.5 step guard");
}

}  // namespace

Mat2 hamiltonian_exponential(const QubitHamiltonian& h, double t) {
    // H = omega * n.sigma with n = (off_diag, 0, -ez)/omega, so
    // U = cos(omega t) I - i sin(omega t) (n_x sigma_x + n_z sigma_z).
    const double omega = std::hypot(h.ez, h.off_diag);
    if (omega == 0.0) return Mat2::identity();
    const double theta = omega * t;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const cplx u(c, s * h.ez / omega);        // c - i n_z s, n_z = -ez/omega
    const cplx w(0.0, -s * h.off_diag / omega);  // -i n_x s
    return {u, w, w, std::conj(u)};
}

DensityMatrix evolve_unitary(const DensityMatrix& rho, const QubitHamiltonian& h, double dt) {
    check_step(h, dt);
    const Mat2 U = hamiltonian_exponential(h, dt);
    const cplx p(rho.rho00);
    const cplx q = rho.rho01;
    // rho' = U rho U^dag, writing only the two stored entries
    const cplx r00 = (U.a * p + U.b * std::conj(q)) * std::conj(U.a) +
                     (U.a * q + U.b * (1.0 - p)) * std::conj(U.b);
    const cplx r01 = (U.a * p + U.b * std::conj(q)) * std::conj(U.c) +
                     (U.a * q + U.b * (1.0 - p)) * std::conj(U.d);
    return {r00.real(), r01};
}

DensityMatrix evolve_euler(const DensityMatrix& rho, const QubitHamiltonian& h, double dt) {
    check_step(h, dt);
    const double p = rho.rho00;
    const cplx q = rho.rho01;
    const double v = h.off_diag;
    // [H, rho]00 = -2i v Im q ; [H, rho]01 = -2 ez q + v (1 - 2p)
    const double p1 = p - 2.0 * v * dt * q.imag();
    const cplx q1 = q + cplx(0.0, 2.0 * h.ez * dt) * q - cplx(0.0, v * dt) * (1.0 - 2.0 * p);
    return {p1, q1};
}

}  // namespace qcal
