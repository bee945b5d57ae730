#pragma once

#include <cmath>

namespace powheat::detail {

/// Unevaluated sum of two doubles (Dekker/Knuth pair arithmetic), ~32
/// significant digits. Used for series whose terms cancel heavily.
struct DoubleDouble {
    double hi = 0.0;
    double lo = 0.0;

    constexpr DoubleDouble() = default;
    constexpr DoubleDouble(double h) : hi(h), lo(0.0) {}
    constexpr DoubleDouble(double h, double l) : hi(h), lo(l) {}

    explicit operator double() const { return hi + lo; }
};

inline DoubleDouble two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline DoubleDouble two_prod(double a, double b) {
    double p = a * b;
    double err = std::fma(a, b, -p);
    return {p, err};
}

inline DoubleDouble quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}

inline DoubleDouble operator+(DoubleDouble a, DoubleDouble b) {
    DoubleDouble s = two_sum(a.hi, b.hi);
    double lo = s.lo + a.lo + b.lo;
    return quick_two_sum(s.hi, lo);
}

inline DoubleDouble operator-(DoubleDouble a, DoubleDouble b) {
    return a + DoubleDouble(-b.hi, -b.lo);
}

inline DoubleDouble operator*(DoubleDouble a, DoubleDouble b) {
    DoubleDouble p = two_prod(a.hi, b.hi);
    double lo = p.lo + a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, lo);
}

inline DoubleDouble operator/(DoubleDouble a, DoubleDouble b) {
    double q1 = a.hi / b.hi;
    DoubleDouble r = a - DoubleDouble(q1) * b;
    double q2 = r.hi / b.hi;
    r = r - DoubleDouble(q2) * b;
    double q3 = r.hi / b.hi;
    return quick_two_sum(q1, q2) + DoubleDouble(q3);
}

inline DoubleDouble operator*(double a, DoubleDouble b) { return DoubleDouble(a) * b; }
inline DoubleDouble operator/(DoubleDouble a, double b) { return a / DoubleDouble(b); }

inline double abs(DoubleDouble a) { return std::abs(static_cast<double>(a)); }

} // namespace powheat::detail
