#pragma once

#include <cmath>
#include <complex>

namespace qcal {

using cplx = std::complex<double>;

// Dense complex 2x2, row-major [[a, b], [c, d]]. Everything this project
// needs fits in a handful of inline operations; no general linear algebra.
struct Mat2 {
    cplx a{}, b{}, c{}, d{};

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }

    Mat2 operator*(cplx s) const { return {a * s, b * s, c * s, d * s}; }
    Mat2 operator+(const Mat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
    Mat2 operator-(const Mat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }

    Mat2 adjoint() const {
        return {std::conj(a), std::conj(c), std::conj(b), std::conj(d)};
    }

    cplx trace() const { return a + d; }

    // max |entry|, enough for unitarity/target-distance checks
    double max_abs() const {
        return std::max(std::max(std::abs(a), std::abs(b)),
                        std::max(std::abs(c), std::abs(d)));
    }
};

// Pure qubit state (amplitudes on |0>, |1>).
struct Vec2 {
    cplx u{}, v{};

    double norm_sq() const { return std::norm(u) + std::norm(v); }

    Vec2 normalized() const {
        const double n = std::sqrt(norm_sq());
        return {u / n, v / n};
    }
};

inline Vec2 operator*(const Mat2& m, const Vec2& x) {
    return {m.a * x.u + m.b * x.v, m.c * x.u + m.d * x.v};
}

inline cplx inner(const Vec2& x, const Vec2& y) {
    return std::conj(x.u) * y.u + std::conj(x.v) * y.v;
}

// Operator distance min_phi || e^{i phi} A - B ||_max: compares unitaries
// with the global phase quotiented out.
inline double phase_quotient_distance(const Mat2& a, const Mat2& b) {
    const cplx overlap = (a.adjoint() * b).trace();
    const double mag = std::abs(overlap);
    const cplx phase = mag > 0 ? overlap / mag : cplx(1.0, 0.0);
    return (a * phase - b).max_abs();
}

}  // namespace qcal
