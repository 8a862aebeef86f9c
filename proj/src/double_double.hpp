#pragma once

#include <cmath>

namespace condexp::detail {

/// Unevaluated sum hi + lo carrying roughly 106 bits of mantissa. Used to
/// evaluate finite-difference quotients without cancellation error.
struct DoubleDouble {
    double hi = 0.0;
    double lo = 0.0;

    DoubleDouble() = default;
    constexpr DoubleDouble(double v) : hi(v), lo(0.0) {}  // NOLINT(google-explicit-constructor)
    constexpr DoubleDouble(double h, double l) : hi(h), lo(l) {}

    double value() const { return hi + lo; }
};

inline DoubleDouble quick_two_sum(double a, double b) {
    const double s = a + b;
    return {s, b - (s - a)};
}

inline DoubleDouble two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

inline DoubleDouble two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline DoubleDouble operator+(DoubleDouble a, DoubleDouble b) {
    DoubleDouble s = two_sum(a.hi, b.hi);
    DoubleDouble t = two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline DoubleDouble operator-(DoubleDouble a) { return {-a.hi, -a.lo}; }
inline DoubleDouble operator-(DoubleDouble a, DoubleDouble b) { return a + (-b); }

inline DoubleDouble operator*(DoubleDouble a, DoubleDouble b) {
    DoubleDouble p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, p.lo);
}

inline DoubleDouble operator/(DoubleDouble a, double b) {
    const double q1 = a.hi / b;
    const DoubleDouble r = a - two_prod(q1, b);
    const double q2 = r.hi / b;
    return quick_two_sum(q1, q2);
}

}  // namespace condexp::detail
