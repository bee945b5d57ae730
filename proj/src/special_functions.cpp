#include "powheat/special_functions.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "powheat/detail/double_double.hpp"
#include "powheat/ode.hpp"

namespace powheat {

using detail::DoubleDouble;
using detail::two_sum;

namespace {

constexpr double kPi = 3.14159265358979323846;

bool near_integer(double x, double tol = 1e-6) {
    return std::abs(x - std::round(x)) < tol;
}

double seed_point(double param_scale) { return std::max(30.0, 3.0 * param_scale); }

/// Kummer series M(alpha,beta,x) and its derivative, accumulated in
/// double-double to survive the cancellation at negative effective
/// arguments or negative alpha. Requires beta not a non-positive integer.
struct KummerSums {
    double value;
    double deriv;
    double abs_error;
};

KummerSums kummer_series(double alpha, double beta, double x) {
    DoubleDouble term(1.0);
    DoubleDouble sum(1.0);
    DoubleDouble dsum(0.0); // sum of n * t_n / x gives M'
    double max_mag = 1.0;
    for (int n = 1; n < 4000; ++n) {
        DoubleDouble num = DoubleDouble(two_sum(alpha, n - 1.0)) * DoubleDouble(x);
        DoubleDouble den = DoubleDouble(two_sum(beta, n - 1.0)) * DoubleDouble(double(n));
        term = term * num / den;
        sum = sum + term;
        dsum = dsum + double(n) * term;
        max_mag = std::max(max_mag, std::abs(double(term)));
        if (std::abs(double(term)) < 1e-34 * std::max(1.0, std::abs(double(sum))) && n > 4)
            break;
    }
    KummerSums r;
    r.value = double(sum);
    r.deriv = x != 0.0 ? double(dsum) / x : alpha / beta;
    r.abs_error = 1e-30 * max_mag + 4e-16 * std::abs(r.value);
    return r;
}

/// Frobenius series y = rho^s sum c_k rho^k for the Coulomb-type equation
/// y'' + (1 - 2 eta / rho - l(l+1)/rho^2) y = 0 with indicial exponent s
/// (s = l+1 regular, s = -l irregular, the latter valid only when 2l+1 is
/// not an integer). Returns value and derivative.
struct FrobeniusResult {
    double value;
    double deriv;
    double abs_error;
};

FrobeniusResult coulomb_frobenius(double l, double eta, double s, double rho) {
    const double mu = 2.0 * eta;
    // c_k [ (s+k)(s+k-1) - l(l+1) ] = mu c_{k-1} - c_{k-2}
    DoubleDouble cm2(0.0), cm1(1.0);
    DoubleDouble pw(1.0);            // rho^k
    DoubleDouble sum(1.0);           // sum c_k rho^k
    DoubleDouble dsum = DoubleDouble(s); // sum (s+k) c_k rho^k
    double max_mag = 1.0;
    double prev_contrib = 1.0;
    const DoubleDouble ll = DoubleDouble(l) * two_sum(l, 1.0); // l(l+1) exactly
    for (int k = 1; k < 6000; ++k) {
        // keep the indicial factors in pair arithmetic: a double-rounded
        // denominator perturbs each term at 1e-16 relative, which the
        // cancellation amplifies by max_term/|sum|
        const DoubleDouble denom =
            two_sum(s, double(k)) * two_sum(s, double(k) - 1.0) - ll;
        DoubleDouble ck = (mu * cm1 - cm2) / denom;
        pw = pw * DoubleDouble(rho);
        DoubleDouble contrib = ck * pw;
        sum = sum + contrib;
        dsum = dsum + DoubleDouble(s + k) * contrib;
        max_mag = std::max(max_mag, std::abs(double(contrib)));
        const double c = std::abs(double(contrib));
        if (k > 4 && c < 1e-34 * std::max(1.0, std::abs(double(sum))) &&
            prev_contrib < 1e-34 * std::max(1.0, std::abs(double(sum))))
            break;
        prev_contrib = c;
        cm2 = cm1;
        cm1 = ck;
    }
    const double pref = std::pow(rho, s);
    FrobeniusResult r;
    r.value = pref * double(sum);
    r.deriv = pref / rho * double(dsum);
    r.abs_error = pref * (1e-28 * max_mag) + 4e-16 * std::abs(r.value);
    return r;
}

using Vec2 = Eigen::Vector2d;

OdeValue integrate_family(const OdeBasisSpec& spec, double from, double to, Vec2 y0,
                          double seed_err) {
    auto rhs = [&spec](double x, const Vec2& y) {
        return Vec2(y(1), ode_second_derivative(spec, x, y(0), y(1)));
    };
    Vec2 y = integrate_ode<2>(rhs, from, to, y0, 1e-12, 1e-300);
    OdeValue r;
    r.value = y(0);
    r.deriv = y(1);
    r.abs_error = seed_err + 1e-11 * (std::abs(y(0)) + std::abs(y(1)));
    return r;
}

/// Raw (unnormalized) irregular companion for Kummer and Coulomb.
OdeValue irregular_raw(const OdeBasisSpec& spec, double x) {
    if (spec.family == OdeFamily::Kummer) {
        const double exp_diff = spec.beta - 1.0; // exponent difference at 0
        if (!near_integer(exp_diff)) {
            // Second Frobenius branch x^(1-beta) M(alpha-beta+1, 2-beta, x).
            const double a2 = spec.alpha - spec.beta + 1.0;
            const double b2 = 2.0 - spec.beta;
            KummerSums m = kummer_series(a2, b2, x);
            const double p = std::pow(x, 1.0 - spec.beta);
            OdeValue r;
            r.value = p * m.value;
            r.deriv = (1.0 - spec.beta) * p / x * m.value + p * m.deriv;
            r.abs_error = p * m.abs_error + 4e-16 * std::abs(r.value);
            return r;
        }
        // Integer exponent difference: inward integration from a
        // U-asymptotic seed at large xi.
        const double s = seed_point(std::abs(spec.alpha) + std::abs(spec.beta));
        if (spec.alpha <= 0.5 && near_integer(spec.alpha)) {
            // Degenerate U direction: for non-positive integer alpha the
            // regular solution is a polynomial and the decaying asymptotic
            // series collapses onto it. Seed any independent solution;
            // the e^x-growing companion dominates the polynomial, so the
            // numerical Wronskian normalization stays well conditioned.
            return integrate_family(spec, s, x, Vec2(0.0, 1.0), 1e-13);
        }
        if (x >= s) {
            // Truncated asymptotic series for U(alpha, beta, x):
            // sum_n (alpha)_n (alpha-beta+1)_n (-1)^n / (n! x^n).
            double term = 1.0, sum = 1.0, dsum = 0.0, last = 1.0;
            for (int n = 1; n < 60; ++n) {
                const double next =
                    term * (spec.alpha + n - 1.0) * (spec.alpha - spec.beta + n) /
                    (-static_cast<double>(n) * x);
                if (std::abs(next) >= std::abs(term)) break; // divergent tail
                term = next;
                sum += term;
                dsum += n * term;
                last = std::abs(term);
            }
            const double p = std::pow(x, -spec.alpha);
            OdeValue r;
            r.value = p * sum;
            r.deriv = p / x * (-spec.alpha * sum - dsum);
            r.abs_error = p * (last + 1e-15 * std::abs(sum));
            return r;
        }
        const double p = std::pow(s, -spec.alpha);
        Vec2 seed(p, -spec.alpha / s * p);
        return integrate_family(spec, s, x, seed, 1e-13 * p);
    }

    // Coulomb family.
    const double exp_diff = 2.0 * spec.l + 1.0;
    if (!near_integer(exp_diff)) {
        if (x <= kRhoSwitch) {
            FrobeniusResult fr = coulomb_frobenius(spec.l, spec.eta, -spec.l, x);
            return OdeValue{fr.value, fr.deriv, fr.abs_error};
        }
        FrobeniusResult at_switch = coulomb_frobenius(spec.l, spec.eta, -spec.l, kRhoSwitch);
        return integrate_family(spec, kRhoSwitch, x,
                                Vec2(at_switch.value, at_switch.deriv),
                                at_switch.abs_error);
    }
    // Integer exponent difference: integrate from an oscillatory
    // asymptotic seed; the phase offset is arbitrary, any independent
    // solution serves as the companion.
    const double s = seed_point(std::abs(spec.l) + 2.0 * std::abs(spec.eta) + 1.0);
    const double theta = s - spec.eta * std::log(2.0 * s) - spec.l * kPi / 2.0;
    Vec2 seed(std::cos(theta), -(1.0 - spec.eta / s) * std::sin(theta));
    return integrate_family(spec, s, x, seed, 1e-12);
}

double wronskian_weight(const OdeBasisSpec& spec, double x) {
    if (spec.family == OdeFamily::Kummer)
        return std::pow(x, spec.beta) * std::exp(-x);
    return 1.0; // Coulomb equation has no first-derivative term
}

} // namespace

SpecialValue bessel(BesselKind kind, double nu, double x) {
    if (!(x > 0.0)) throw std::domain_error("bessel: x must be positive");
    if (!(nu >= 0.0)) throw std::domain_error("bessel: order must be nonnegative");
    double v = 0.0;
    switch (kind) {
    case BesselKind::J: v = std::cyl_bessel_j(nu, x); break;
    case BesselKind::Y: v = std::cyl_neumann(nu, x); break;
    case BesselKind::I: v = std::cyl_bessel_i(nu, x); break;
    case BesselKind::K: v = std::cyl_bessel_k(nu, x); break;
    }
    if (!std::isfinite(v))
        throw std::range_error("bessel: result overflow/out of range");
    double err;
    if (kind == BesselKind::J || kind == BesselKind::Y)
        err = 5e-15 * (std::abs(v) + std::sqrt(2.0 / (kPi * x)));
    else
        err = 5e-15 * std::abs(v) * (1.0 + 0.1 * nu);
    return SpecialValue{v, err};
}

double bessel_derivative(BesselKind kind, double nu, double x) {
    const double f = bessel(kind, nu, x).value;
    const double g = bessel(kind, nu + 1.0, x).value;
    switch (kind) {
    case BesselKind::J:
    case BesselKind::Y:
    case BesselKind::K:
        return -g + nu / x * f;
    case BesselKind::I:
        return g + nu / x * f;
    }
    return 0.0;
}

SpecialValue kummer_m(double alpha, double beta, double x) {
    if (beta <= 0.0 && near_integer(beta, 1e-12))
        throw std::domain_error("kummer_m: beta must not be a non-positive integer");
    if (x < 0.0) {
        // Kummer reflection to a positive-argument series.
        KummerSums m = kummer_series(beta - alpha, beta, -x);
        const double e = std::exp(x);
        return SpecialValue{e * m.value, e * m.abs_error + 4e-16 * std::abs(e * m.value)};
    }
    KummerSums m = kummer_series(alpha, beta, x);
    return SpecialValue{m.value, m.abs_error};
}

SpecialValue coulomb_regular(double l, double eta, double rho) {
    if (!(rho > 0.0)) throw std::domain_error("coulomb_regular: rho must be positive");
    if (!(2.0 * l + 1.0 > 0.0))
        throw std::domain_error("coulomb_regular: 2l+1 must be positive");
    OdeValue v = regular_pair(OdeBasisSpec::coulomb(l, eta), rho);
    return SpecialValue{v.value, v.abs_error};
}

SpecialValue log_gamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("log_gamma: x must be positive");
    const double v = std::lgamma(x);
    return SpecialValue{v, 4e-16 * (std::abs(v) + 1.0)};
}

OdeValue regular_pair(const OdeBasisSpec& spec, double x) {
    if (!(x > 0.0)) throw std::domain_error("regular_pair: x must be positive");
    switch (spec.family) {
    case OdeFamily::BesselOrdinary: {
        SpecialValue v = bessel(BesselKind::J, spec.nu, x);
        return OdeValue{v.value, bessel_derivative(BesselKind::J, spec.nu, x), v.abs_error};
    }
    case OdeFamily::BesselModified: {
        SpecialValue v = bessel(BesselKind::I, spec.nu, x);
        return OdeValue{v.value, bessel_derivative(BesselKind::I, spec.nu, x), v.abs_error};
    }
    case OdeFamily::Kummer: {
        KummerSums m = kummer_series(spec.alpha, spec.beta, x);
        return OdeValue{m.value, m.deriv, m.abs_error};
    }
    case OdeFamily::Coulomb: {
        if (x <= kRhoSwitch) {
            FrobeniusResult fr = coulomb_frobenius(spec.l, spec.eta, spec.l + 1.0, x);
            return OdeValue{fr.value, fr.deriv, fr.abs_error};
        }
        FrobeniusResult at_switch =
            coulomb_frobenius(spec.l, spec.eta, spec.l + 1.0, kRhoSwitch);
        return integrate_family(spec, kRhoSwitch, x,
                                Vec2(at_switch.value, at_switch.deriv),
                                at_switch.abs_error);
    }
    }
    throw std::logic_error("regular_pair: unknown family");
}

OdeValue irregular_pair(const OdeBasisSpec& spec, double x) {
    if (!(x > 0.0)) throw std::domain_error("irregular_pair: x must be positive");
    if (x < kXiMin)
        throw DomainError(DomainError::Bound::XiMin,
                          "irregular_pair: evaluation below xi_min = 1e-8");
    switch (spec.family) {
    case OdeFamily::BesselOrdinary: {
        SpecialValue v = bessel(BesselKind::Y, spec.nu, x);
        return OdeValue{v.value, bessel_derivative(BesselKind::Y, spec.nu, x), v.abs_error};
    }
    case OdeFamily::BesselModified: {
        SpecialValue v = bessel(BesselKind::K, spec.nu, x);
        return OdeValue{v.value, bessel_derivative(BesselKind::K, spec.nu, x), v.abs_error};
    }
    case OdeFamily::Kummer:
    case OdeFamily::Coulomb: {
        OdeValue raw = irregular_raw(spec, x);
        // The second Frobenius branch has an exact weighted Wronskian
        // against the regular one (from Abel's identity and the leading
        // behavior at the origin): beta - 1 for Kummer, 2l + 1 for
        // Coulomb. Using the closed form avoids the cancellation that
        // defeats a numerical Wronskian when both solutions grow like
        // e^x at large argument.
        double s;
        const bool frobenius = spec.family == OdeFamily::Kummer
                                   ? !near_integer(spec.beta - 1.0)
                                   : !near_integer(2.0 * spec.l + 1.0);
        if (frobenius) {
            s = spec.family == OdeFamily::Kummer ? spec.beta - 1.0 : 2.0 * spec.l + 1.0;
        } else {
            // Integration-backed companions (integer exponent difference)
            // are normalized numerically; they stay independent of the
            // regular branch at all arguments, so no cancellation arises.
            OdeValue reg = regular_pair(spec, x);
            const double w = wronskian_weight(spec, x);
            s = w * (reg.deriv * raw.value - reg.value * raw.deriv);
        }
        if (s == 0.0 || !std::isfinite(s))
            throw std::runtime_error("irregular_pair: degenerate Wronskian normalization");
        return OdeValue{raw.value / s, raw.deriv / s,
                        raw.abs_error / std::abs(s) + 4e-16 * std::abs(raw.value / s)};
    }
    }
    throw std::logic_error("irregular_pair: unknown family");
}

SpecialValue second_solution(const OdeBasisSpec& spec, double x) {
    OdeValue v = irregular_pair(spec, x);
    return SpecialValue{v.value, v.abs_error};
}

double ode_second_derivative(const OdeBasisSpec& spec, double x, double y, double yp) {
    switch (spec.family) {
    case OdeFamily::BesselOrdinary:
        return -(yp / x) - (1.0 - spec.nu * spec.nu / (x * x)) * y;
    case OdeFamily::BesselModified:
        return -(yp / x) + (1.0 + spec.nu * spec.nu / (x * x)) * y;
    case OdeFamily::Kummer:
        return ((x - spec.beta) * yp + spec.alpha * y) / x;
    case OdeFamily::Coulomb:
        return -(1.0 - 2.0 * spec.eta / x - spec.l * (spec.l + 1.0) / (x * x)) * y;
    }
    throw std::logic_error("ode_second_derivative: unknown family");
}

double ode_residual(const OdeBasisSpec& spec, double x, double y, double yp, double ypp) {
    const double implied = ode_second_derivative(spec, x, y, yp);
    const double scale = std::max({std::abs(implied), std::abs(ypp), std::abs(y), 1e-300});
    return (ypp - implied) / scale;
}

} // namespace powheat
