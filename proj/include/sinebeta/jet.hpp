#pragma once

#include <cmath>

namespace sinebeta {

// Second-order forward-mode value: (f, f', f'') with respect to one variable.
struct Jet {
    double v = 0.0, d1 = 0.0, d2 = 0.0;

    constexpr Jet() = default;
    constexpr Jet(double value, double first = 0.0, double second = 0.0)
        : v(value), d1(first), d2(second) {}

    static constexpr Jet variable(double x) { return {x, 1.0, 0.0}; }
};

inline Jet operator+(Jet a, Jet b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2}; }
inline Jet operator-(Jet a, Jet b) { return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2}; }
inline Jet operator-(Jet a) { return {-a.v, -a.d1, -a.d2}; }
inline Jet operator*(Jet a, Jet b) {
    return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2};
}
inline Jet operator*(double c, Jet a) { return {c * a.v, c * a.d1, c * a.d2}; }
inline Jet operator*(Jet a, double c) { return c * a; }
inline Jet operator+(Jet a, double c) { return {a.v + c, a.d1, a.d2}; }
inline Jet operator+(double c, Jet a) { return a + c; }
inline Jet operator-(Jet a, double c) { return {a.v - c, a.d1, a.d2}; }
inline Jet operator-(double c, Jet a) { return {c - a.v, -a.d1, -a.d2}; }

inline Jet reciprocal(Jet a) {
    const double r = 1.0 / a.v;
    return {r, -a.d1 * r * r, (2.0 * a.d1 * a.d1 * r - a.d2) * r * r};
}
inline Jet operator/(Jet a, Jet b) { return a * reciprocal(b); }
inline Jet operator/(Jet a, double c) { return {a.v / c, a.d1 / c, a.d2 / c}; }
inline Jet operator/(double c, Jet a) { return c * reciprocal(a); }

// Chain rule for a scalar function with known value and first two derivatives at a.v.
inline Jet compose(double f0, double f1, double f2, Jet a) {
    return {f0, f1 * a.d1, f2 * a.d1 * a.d1 + f1 * a.d2};
}

inline Jet exp(Jet a) {
    const double e = std::exp(a.v);
    return compose(e, e, e, a);
}

}  // namespace sinebeta
