#pragma once

#include <cmath>

#include "powheat/errors.hpp"

namespace powheat {

/// A function value with an estimated absolute error bound.
struct SpecialValue {
    double value;
    double abs_error;
};

/// Value and first derivative of an ODE solution, with error estimate.
struct OdeValue {
    double value;
    double deriv;
    double abs_error;
};

enum class BesselKind { J, Y, I, K };

enum class OdeFamily { BesselOrdinary, BesselModified, Kummer, Coulomb };

/// Identifies one of the second-order ODE families arising from the
/// symmetry reductions, with its parameters:
///   Bessel families: order nu
///   Kummer: x y'' + (beta - x) y' - alpha y = 0
///   Coulomb: y'' + (1 - 2 eta / x - l(l+1)/x^2) y = 0
struct OdeBasisSpec {
    OdeFamily family;
    double nu = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double l = 0.0;
    double eta = 0.0;

    static OdeBasisSpec bessel_ordinary(double nu) {
        return OdeBasisSpec{OdeFamily::BesselOrdinary, nu, 0, 0, 0, 0};
    }
    static OdeBasisSpec bessel_modified(double nu) {
        return OdeBasisSpec{OdeFamily::BesselModified, nu, 0, 0, 0, 0};
    }
    static OdeBasisSpec kummer(double alpha, double beta) {
        return OdeBasisSpec{OdeFamily::Kummer, 0, alpha, beta, 0, 0};
    }
    /// Coulomb spec with l = a/2 - 1/2 and eta = mu/2, matching the
    /// reduction's -mu/xi coefficient to the standard -2 eta / rho form.
    static OdeBasisSpec coulomb(double l, double eta) {
        return OdeBasisSpec{OdeFamily::Coulomb, 0, 0, 0, l, eta};
    }
    static OdeBasisSpec coulomb_from_reduction(double a, double mu) {
        return coulomb(0.5 * a - 0.5, 0.5 * mu);
    }
};

/// Irregular branches blow up at the origin; evaluation below this point
/// is rejected.
inline constexpr double kXiMin = 1e-8;

/// Frobenius series are used up to this argument; beyond it evaluation
/// switches to outward ODE integration seeded from the series.
inline constexpr double kRhoSwitch = 20.0;

/// Cylinder functions of real nonnegative order. Relative accuracy
/// ~1e-14 for x in (0, 50], nu <= 5 (checked by the Wronskian tests).
SpecialValue bessel(BesselKind kind, double nu, double x);

/// d/dx of the cylinder functions via the order-raising recurrences.
double bessel_derivative(BesselKind kind, double nu, double x);

/// Confluent hypergeometric M(alpha, beta, x). For x < 0 the Kummer
/// reflection M(a,b,x) = e^x M(b-a, b, -x) avoids cancellation.
SpecialValue kummer_m(double alpha, double beta, double x);

/// Regular Coulomb-type solution normalized to leading behavior
/// rho^(l+1) with coefficient 1 (not the scattering-normalized F_l).
SpecialValue coulomb_regular(double l, double eta, double rho);

SpecialValue log_gamma(double x);

/// Regular branch of the family with its derivative.
OdeValue regular_pair(const OdeBasisSpec& spec, double x);

/// Irregular companion with its derivative. For Bessel families this is
/// Y or K; for Kummer and Coulomb the second solution normalized so that
/// the weighted Wronskian  w(x) (y_reg' y_irr - y_reg y_irr') = 1,
/// with weight x^beta e^(-x) for Kummer and 1 for Coulomb.
OdeValue irregular_pair(const OdeBasisSpec& spec, double x);

/// Irregular companion value (Y/K dispatch for Bessel families).
SpecialValue second_solution(const OdeBasisSpec& spec, double x);

/// Residual of a (value, derivative) pair in the family's ODE, relative
/// to the largest term; used by the verification tests.
double ode_residual(const OdeBasisSpec& spec, double x, double y, double yp, double ypp);

/// Second derivative implied by the family's ODE at (x, y, y').
double ode_second_derivative(const OdeBasisSpec& spec, double x, double y, double yp);

} // namespace powheat
