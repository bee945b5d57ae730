#include "powheat/lie_algebra.hpp"

#include <algorithm>
#include <cmath>

namespace powheat {

namespace {

void require_same_param(const Generator& X, const Generator& Y, const char* op) {
    if (!(X.param == Y.param))
        throw ParameterMismatch(std::string(op) + ": generators carry different parameters a");
}

void require_basis_index(int i, const char* op) {
    if (i < 1 || i > 4)
        throw std::invalid_argument(std::string(op) + ": basis index must be in 1..4");
}

} // namespace

InfinitesimalCoefficients infinitesimals(const Generator& X) {
    return InfinitesimalCoefficients{X.k, X.param.value()};
}

Generator commutator(const Generator& X, const Generator& Y) {
    require_same_param(X, Y, "commutator");
    const double a = X.param.value();
    const Vec4& p = X.k;
    const Vec4& q = Y.k;
    // Antisymmetric pair products k_i l_j - k_j l_i.
    const double w12 = p(0) * q(1) - p(1) * q(0);
    const double w13 = p(0) * q(2) - p(2) * q(0);
    const double w23 = p(1) * q(2) - p(2) * q(1);
    Vec4 r;
    r(0) = w12;                // [X1,X2] = X1
    r(1) = 2.0 * w13;          // [X1,X3] = 2 X2 + (a-1) X4
    r(2) = w23;                // [X2,X3] = X3
    r(3) = (a - 1.0) * w13;
    return Generator(r, X.param);
}

Mat4 ad_matrix(int i, PowerLawParameter p) {
    require_basis_index(i, "ad_matrix");
    const double a = p.value();
    Mat4 m = Mat4::Zero();
    switch (i) {
    case 1:
        // [X1,X2] = X1, [X1,X3] = 2 X2 + (a-1) X4
        m(0, 1) = 1.0;
        m(1, 2) = 2.0;
        m(3, 2) = a - 1.0;
        break;
    case 2:
        // [X2,X1] = -X1, [X2,X3] = X3
        m(0, 0) = -1.0;
        m(2, 2) = 1.0;
        break;
    case 3:
        // [X3,X1] = -2 X2 - (a-1) X4, [X3,X2] = -X3
        m(1, 0) = -2.0;
        m(3, 0) = -(a - 1.0);
        m(2, 1) = -1.0;
        break;
    case 4:
        break; // central
    }
    return m;
}

Generator adjoint_coefficients(int i, double eps, const Generator& X) {
    require_basis_index(i, "adjoint_coefficients");
    if (!std::isfinite(eps))
        throw std::invalid_argument("adjoint_coefficients: eps must be finite");
    const double a = X.param.value();
    const Vec4& k = X.k;
    Vec4 r = k;
    switch (i) {
    case 1:
        r(0) = k(0) - eps * k(1) + eps * eps * k(2);
        r(1) = k(1) - 2.0 * eps * k(2);
        r(2) = k(2);
        r(3) = k(3) - eps * (a - 1.0) * k(2);
        break;
    case 2:
        r(0) = k(0) * std::exp(eps);
        r(2) = k(2) * std::exp(-eps);
        break;
    case 3:
        r(0) = k(0);
        r(1) = k(1) + 2.0 * eps * k(0);
        r(2) = k(2) + eps * k(1) + eps * eps * k(0);
        r(3) = k(3) + eps * (a - 1.0) * k(0);
        break;
    case 4:
        break;
    }
    return Generator(r, X.param);
}

Generator adjoint_series(int i, double eps, const Generator& X, int max_terms) {
    require_basis_index(i, "adjoint_series");
    const Mat4 m = -eps * ad_matrix(i, X.param);
    Vec4 sum = X.k;
    Vec4 term = X.k;
    for (int n = 1; n < max_terms; ++n) {
        term = (m * term) / static_cast<double>(n);
        sum += term;
        if (term.norm() <= 1e-18 * std::max(1.0, sum.norm())) break;
    }
    return Generator(sum, X.param);
}

AdjointInvariants invariants(const Generator& X) {
    const Vec4& k = X.k;
    const double a = X.param.value();
    const double phi1 = k(1) * k(1) - 4.0 * k(0) * k(2);
    const double phi2 = X.param.is_unit() ? k(3) : k(1) + 2.0 / (1.0 - a) * k(3);
    return AdjointInvariants{phi1, phi2};
}

Generator apply(const AdjointMap& map, const Generator& X) {
    Generator g = X;
    for (const AdjointStep& s : map.steps)
        g = adjoint_coefficients(s.basis_index, s.eps, g);
    if (map.rescale == 0.0 || !std::isfinite(map.rescale))
        throw std::invalid_argument("AdjointMap: rescale must be finite and nonzero");
    return Generator(map.rescale * g.k, g.param);
}

Generator OptimalClass::representative(PowerLawParameter p) const {
    Vec4 k = Vec4::Zero();
    const double m = mu.value_or(0.0);
    switch (tag) {
    case OptimalTag::Translation:
        k(0) = 1.0;
        k(3) = m;
        break;
    case OptimalTag::Scaling:
        k(1) = 1.0;
        k(3) = m;
        break;
    case OptimalTag::Projective:
        k(0) = 1.0;
        k(2) = 1.0;
        k(3) = m;
        break;
    case OptimalTag::Vertical:
        k(3) = 1.0;
        break;
    case OptimalTag::Zero:
        break;
    }
    return Generator(k, p);
}

const char* to_string(OptimalTag tag) {
    switch (tag) {
    case OptimalTag::Translation: return "Translation";
    case OptimalTag::Scaling: return "Scaling";
    case OptimalTag::Projective: return "Projective";
    case OptimalTag::Vertical: return "Vertical";
    case OptimalTag::Zero: return "Zero";
    }
    return "?";
}

Classification classify(const Generator& X, double tol) {
    if (!(tol > 0.0))
        throw std::invalid_argument("classify: tol must be positive");
    if (!X.k.allFinite())
        throw std::invalid_argument("classify: non-finite coefficients");

    const double n2 = X.k.squaredNorm();
    AdjointMap map;
    if (n2 == 0.0)
        return Classification{OptimalClass{OptimalTag::Zero, std::nullopt}, map};

    const double kn = std::sqrt(n2);
    auto negligible = [&](double v) { return std::abs(v) <= tol * kn; };

    // Working copy evolved with the genuine adjoint updates so that the
    // returned map reproduces exactly what the classifier saw.
    Vec4 w = X.k;
    auto push = [&](int i, double eps) {
        if (eps == 0.0) return;
        map.steps.push_back(AdjointStep{i, eps});
        w = adjoint_coefficients(i, eps, Generator(w, X.param)).k;
    };
    auto finish = [&](OptimalTag tag, double lead) {
        map.rescale = 1.0 / lead;
        return Classification{OptimalClass{tag, w(3) / lead}, map};
    };

    const double phi1 = invariants(X).phi1;

    if (negligible(w(0)) && negligible(w(1)) && negligible(w(2))) {
        map.rescale = 1.0 / w(3);
        return Classification{OptimalClass{OptimalTag::Vertical, std::nullopt}, map};
    }

    if (phi1 > tol * n2) {
        // Scaling class: zero k1 (root of k3 e^2 - k2 e + k1 = 0), then k3.
        const double disc = std::sqrt(phi1);
        if (!negligible(w(2))) {
            const double q = 0.5 * (w(1) + (w(1) >= 0.0 ? disc : -disc));
            push(1, q != 0.0 ? w(0) / q : 0.0); // stable root k1/q; q = 0 only if k1 = 0 too
            if (std::abs(w(0)) > tol * kn && w(1) != 0.0) {
                // fall back to the other root if cancellation left k1 large
                push(1, w(0) / w(1));
            }
        } else if (!negligible(w(0))) {
            push(1, w(0) / w(1)); // degenerate quadratic, k3 = 0
        }
        if (w(2) != 0.0) push(3, -w(2) / w(1));
        return finish(OptimalTag::Scaling, w(1));
    }

    if (phi1 < -tol * n2) {
        // Projective class: phi1 < 0 forces k1 k3 > 0.
        push(1, w(1) / (2.0 * w(2)));                       // zero k2
        push(2, 0.5 * std::log(std::abs(w(2) / w(0))));     // equalize |k1|, |k3|
        return finish(OptimalTag::Projective, w(0));
    }

    // phi1 ~ 0 with some of k1..k3 nonzero.
    if (!negligible(w(0))) {
        push(3, -w(1) / (2.0 * w(0))); // double root zeroes k2 and k3 together
        return finish(OptimalTag::Translation, w(0));
    }
    if (!negligible(w(2))) {
        push(1, 1.0); // preliminary step makes k1 nonzero
        push(3, -w(1) / (2.0 * w(0)));
        return finish(OptimalTag::Translation, w(0));
    }
    if (!negligible(w(1))) {
        // k1 ~ k3 ~ 0, k2 dominant: already a scaling generator.
        return finish(OptimalTag::Scaling, w(1));
    }
    map.rescale = 1.0 / w(3);
    return Classification{OptimalClass{OptimalTag::Vertical, std::nullopt}, map};
}

ResidualReport check_determining_equations(const Generator& X,
                                           const std::vector<std::pair<double, double>>& samples,
                                           double tolerance) {
    if (samples.empty())
        throw std::invalid_argument("check_determining_equations: empty sample list");
    for (const auto& [t, x] : samples)
        if (!(x > 0.0))
            throw DomainError(DomainError::Bound::XMin,
                              "check_determining_equations: sample x must be positive");

    const InfinitesimalCoefficients c = infinitesimals(X);
    const double a = c.a;
    const double exponent = 2.0 - 1.0 / a;

    double max_abs = 0.0;
    double scale = 0.0;
    double t_lo = samples.front().first, t_hi = t_lo;
    double x_lo = samples.front().second, x_hi = x_lo;
    for (const auto& [t, x] : samples) {
        const double d = std::pow(x, exponent);
        // eta_t - x^(2-1/a) eta_xx = 0 with eta = V u
        const double r1 = c.v_t(t, x) - d * c.v_xx(t, x);
        // 2 x xi_x - (2-1/a) xi = x tau_t
        const double r2 = 2.0 * x * c.xi_x(t, x) - exponent * c.xi(t, x) - x * c.tau_t(t);
        // xi_t - x^(2-1/a) xi_xx = -2 x^(2-1/a) eta_xu
        const double r3 = c.xi_t(t, x) - d * c.xi_xx(t, x) + 2.0 * d * c.v_x(t, x);
        max_abs = std::max({max_abs, std::abs(r1), std::abs(r2), std::abs(r3)});
        scale = std::max({scale, std::abs(c.v_t(t, x)), std::abs(d * c.v_xx(t, x)),
                          std::abs(2.0 * x * c.xi_x(t, x)), std::abs(x * c.tau_t(t)),
                          std::abs(c.xi_t(t, x)), std::abs(2.0 * d * c.v_x(t, x)), 1.0});
        t_lo = std::min(t_lo, t);
        t_hi = std::max(t_hi, t);
        x_lo = std::min(x_lo, x);
        x_hi = std::max(x_hi, x);
    }

    ResidualReport rep;
    rep.grid = GridSpec(t_lo, t_hi + (t_hi == t_lo ? 1.0 : 0.0),
                        std::max<int>(2, static_cast<int>(samples.size())),
                        x_lo, x_hi + (x_hi == x_lo ? 1.0 : 0.0), 2);
    rep.max_abs = max_abs;
    rep.rel_norm = max_abs / scale;
    rep.tolerance = tolerance;
    rep.pass = rep.rel_norm <= tolerance;
    return rep;
}

} // namespace powheat
