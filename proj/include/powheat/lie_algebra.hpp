#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "powheat/errors.hpp"
#include "powheat/report.hpp"

namespace powheat {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

/// Exponent parameter of the equation u_t = x^(2-1/a) u_xx.
/// Restricted to a > 0, a != 1/2 (a = 1/2 is the constant-coefficient
/// heat equation, whose symmetry algebra is larger and not handled here).
class PowerLawParameter {
public:
    explicit PowerLawParameter(double a) : a_(a) {
        if (!std::isfinite(a))
            throw std::invalid_argument("PowerLawParameter: a must be finite");
        if (!(a > 0.0))
            throw std::invalid_argument("PowerLawParameter: a must be positive");
        if (a == 0.5)
            throw std::invalid_argument(
                "PowerLawParameter: a = 1/2 excluded (constant-coefficient heat equation)");
    }

    double value() const { return a_; }
    bool is_unit() const { return a_ == 1.0; }
    /// Exponent of the diffusivity x^(2-1/a).
    double diffusivity_exponent() const { return 2.0 - 1.0 / a_; }

    friend bool operator==(const PowerLawParameter& p, const PowerLawParameter& q) {
        return p.a_ == q.a_;
    }

private:
    double a_;
};

/// Element of the four-dimensional symmetry algebra L4, stored as the
/// coefficient vector over the basis {X1, X2, X3, X4}.
struct Generator {
    Vec4 k;
    PowerLawParameter param;

    Generator(const Vec4& coeffs, PowerLawParameter p) : k(coeffs), param(p) {
        if (!k.allFinite())
            throw std::invalid_argument("Generator: coefficients must be finite");
    }

    static Generator basis(int i, PowerLawParameter p) {
        if (i < 1 || i > 4) throw std::invalid_argument("Generator::basis: index in 1..4");
        Vec4 k = Vec4::Zero();
        k(i - 1) = 1.0;
        return Generator(k, p);
    }

    static Generator zero(PowerLawParameter p) { return Generator(Vec4::Zero(), p); }
};

/// Closed forms of the infinitesimals tau(t), xi(t,x) and the multiplier
/// V(t,x) with eta = V u, for a generator k1 X1 + k2 X2 + k3 X3 + k4 X4:
///   tau = k1 + k2 t + k3 t^2
///   xi  = a (k2 + 2 k3 t) x
///   V   = k4 - k3 ((1-a) t + a^2 x^(1/a))
struct InfinitesimalCoefficients {
    Vec4 k;
    double a;

    double tau(double t) const { return k(0) + k(1) * t + k(2) * t * t; }
    double tau_t(double t) const { return k(1) + 2.0 * k(2) * t; }

    double xi(double t, double x) const { return a * (k(1) + 2.0 * k(2) * t) * x; }
    double xi_t(double /*t*/, double x) const { return 2.0 * a * k(2) * x; }
    double xi_x(double t, double /*x*/) const { return a * (k(1) + 2.0 * k(2) * t); }
    double xi_xx(double, double) const { return 0.0; }

    double v(double t, double x) const {
        return k(3) - k(2) * ((1.0 - a) * t + a * a * std::pow(x, 1.0 / a));
    }
    double v_t(double, double) const { return -k(2) * (1.0 - a); }
    double v_x(double /*t*/, double x) const {
        return -k(2) * a * std::pow(x, 1.0 / a - 1.0);
    }
    double v_xx(double /*t*/, double x) const {
        return -k(2) * (1.0 - a) * std::pow(x, 1.0 / a - 2.0);
    }
};

InfinitesimalCoefficients infinitesimals(const Generator& X);

/// Functions of the coefficients constant on adjoint orbits:
///   phi1 = k2^2 - 4 k1 k3
///   phi2 = k4 (a = 1),  k2 + 2 k4 / (1-a) otherwise.
struct AdjointInvariants {
    double phi1;
    double phi2;
};

struct AdjointStep {
    int basis_index; // 1..4
    double eps;
};

/// Ordered adjoint steps followed by a scalar rescale; the empty map with
/// rescale 1 is the identity.
struct AdjointMap {
    std::vector<AdjointStep> steps;
    double rescale = 1.0;

    bool is_identity() const { return steps.empty() && rescale == 1.0; }
};

enum class OptimalTag { Translation, Scaling, Projective, Vertical, Zero };

/// Representative of the optimal system:
///   Translation: X1 + mu X4,  Scaling: X2 + mu X4,
///   Projective:  X1 + X3 + mu X4,  Vertical: X4,  Zero: 0.
struct OptimalClass {
    OptimalTag tag;
    std::optional<double> mu; // absent for Vertical and Zero

    Generator representative(PowerLawParameter p) const;
};

struct Classification {
    OptimalClass cls;
    AdjointMap map;
};

const char* to_string(OptimalTag tag);

/// Lie bracket on coefficient vectors via the structure constants
/// [X1,X2]=X1, [X1,X3]=2X2+(a-1)X4, [X2,X3]=X3.
Generator commutator(const Generator& X, const Generator& Y);

/// Matrix of ad(X_i) on coefficient vectors: column j holds [X_i, X_j].
Mat4 ad_matrix(int i, PowerLawParameter p);

/// Ad(exp(eps X_i)) X by the closed-form coefficient updates.
Generator adjoint_coefficients(int i, double eps, const Generator& X);

/// Ad(exp(eps X_i)) X by the truncated Lie series exp(-eps ad(X_i));
/// oracle path cross-checking the closed forms. Terminates early once the
/// term norm is negligible; ad(X1) and ad(X3) are nilpotent so three terms
/// suffice there.
Generator adjoint_series(int i, double eps, const Generator& X, int max_terms = 40);

AdjointInvariants invariants(const Generator& X);

Generator apply(const AdjointMap& map, const Generator& X);

/// Maps X to its optimal-system representative together with the adjoint
/// map realizing the equivalence. tol is a relative threshold for treating
/// phi1 and coefficients as zero.
Classification classify(const Generator& X, double tol = 1e-12);

/// Evaluates the determining equations of the symmetry condition at the
/// sample points using the exact closed-form derivatives of tau, xi, V.
/// All sample x must be positive.
ResidualReport check_determining_equations(const Generator& X,
                                           const std::vector<std::pair<double, double>>& samples,
                                           double tolerance = 1e-10);

} // namespace powheat
