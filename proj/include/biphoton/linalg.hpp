// Copyright 2026 The biphoton authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace biphoton {

using Complex = std::complex<double>;

inline bool is_finite(Complex c) {
    return std::isfinite(c.real()) && std::isfinite(c.imag());
}

/// Complex 2-vector over the two path/detector modes of one photon.
struct Vec2 {
    std::array<Complex, 2> e{};

    Complex& operator[](int i) { return e[static_cast<std::size_t>(i)]; }
    Complex operator[](int i) const { return e[static_cast<std::size_t>(i)]; }
};

/// Complex 2x2 matrix, row-major. Index 0 is the solid path / detector 1,
/// index 1 the dashed path / detector 2; the same convention is used
/// throughout the library.
struct Mat2 {
    std::array<Complex, 4> e{};

    Complex& operator()(int r, int c) { return e[static_cast<std::size_t>(2 * r + c)]; }
    Complex operator()(int r, int c) const { return e[static_cast<std::size_t>(2 * r + c)]; }

    static Mat2 identity() { return Mat2{{Complex{1.0}, {}, {}, Complex{1.0}}}; }
    static Mat2 diag(Complex a, Complex b) { return Mat2{{a, {}, {}, b}}; }
};

inline Mat2 operator*(const Mat2& a, const Mat2& b) {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
    return r;
}

inline Vec2 operator*(const Mat2& m, const Vec2& v) {
    return Vec2{{m(0, 0) * v[0] + m(0, 1) * v[1], m(1, 0) * v[0] + m(1, 1) * v[1]}};
}

inline Mat2 transpose(const Mat2& m) {
    return Mat2{{m.e[0], m.e[2], m.e[1], m.e[3]}};
}

inline Mat2 conjugate(const Mat2& m) {
    Mat2 r;
    for (std::size_t i = 0; i < 4; ++i) r.e[i] = std::conj(m.e[i]);
    return r;
}

inline Mat2 adjoint(const Mat2& m) { return transpose(conjugate(m)); }

inline Complex trace(const Mat2& m) { return m.e[0] + m.e[3]; }

inline Complex det(const Mat2& m) { return m.e[0] * m.e[3] - m.e[1] * m.e[2]; }

/// Sum of squared moduli of all entries (the squared Frobenius norm).
inline double norm_sq(const Mat2& m) {
    double s = 0.0;
    for (const auto& c : m.e) s += std::norm(c);
    return s;
}

/// Largest elementwise |a - b|.
inline double max_abs_diff(const Mat2& a, const Mat2& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < 4; ++i) d = std::max(d, std::abs(a.e[i] - b.e[i]));
    return d;
}

/// Largest elementwise deviation of U†U from the identity.
inline double unitarity_defect(const Mat2& u) {
    return max_abs_diff(adjoint(u) * u, Mat2::identity());
}

}  // namespace biphoton
