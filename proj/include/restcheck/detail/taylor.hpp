#pragma once

#include <cmath>

namespace restcheck::detail {

/// Truncated Taylor series in one variable: value and first two derivatives.
/// Arithmetic propagates derivatives exactly, so differentiating a closed-form
/// expression reduces to evaluating it on Jet operands.
struct Jet {
    double f = 0;  // value
    double f1 = 0; // d/dt
    double f2 = 0; // d^2/dt^2

    static Jet constant(double c) { return {c, 0, 0}; }
    /// Independent variable t.
    static Jet variable(double t) { return {t, 1, 0}; }
};

inline Jet operator+(const Jet& a, const Jet& b) { return {a.f + b.f, a.f1 + b.f1, a.f2 + b.f2}; }
inline Jet operator-(const Jet& a, const Jet& b) { return {a.f - b.f, a.f1 - b.f1, a.f2 - b.f2}; }
inline Jet operator-(const Jet& a) { return {-a.f, -a.f1, -a.f2}; }

inline Jet operator*(const Jet& a, const Jet& b) {
    return {a.f * b.f,
            a.f1 * b.f + a.f * b.f1,
            a.f2 * b.f + 2.0 * a.f1 * b.f1 + a.f * b.f2};
}

inline Jet operator*(double c, const Jet& a) { return {c * a.f, c * a.f1, c * a.f2}; }
inline Jet operator*(const Jet& a, double c) { return c * a; }
inline Jet operator+(const Jet& a, double c) { return {a.f + c, a.f1, a.f2}; }
inline Jet operator+(double c, const Jet& a) { return a + c; }
inline Jet operator-(const Jet& a, double c) { return {a.f - c, a.f1, a.f2}; }
inline Jet operator-(double c, const Jet& a) { return {c - a.f, -a.f1, -a.f2}; }

inline Jet operator/(const Jet& a, const Jet& b) {
    const double q = a.f / b.f;
    const double q1 = (a.f1 - q * b.f1) / b.f;
    const double q2 = (a.f2 - q * b.f2 - 2.0 * q1 * b.f1) / b.f;
    return {q, q1, q2};
}

inline Jet jet_exp(const Jet& a) {
    const double e = std::exp(a.f);
    return {e, e * a.f1, e * (a.f2 + a.f1 * a.f1)};
}

inline Jet jet_sqrt(const Jet& a) {
    const double s = std::sqrt(a.f);
    const double s1 = a.f1 / (2.0 * s);
    const double s2 = (a.f2 - 2.0 * s1 * s1) / (2.0 * s);
    return {s, s1, s2};
}

} // namespace restcheck::detail
