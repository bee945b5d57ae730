// Independent test-side oracles. These deliberately avoid the library's
// evaluation paths: extended-precision (long double) series for the
// hypergeometric values, and a dense matrix exponential for the adjoint
// action.
#pragma once

#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "powheat/lie_algebra.hpp"

namespace oracles {

/// Series value together with the largest term magnitude seen while
/// summing: cancellation limits the oracle's own accuracy to roughly
/// (long double epsilon) * max_term, which callers must fold into their
/// comparison tolerance.
struct SeriesValue {
    long double value;
    long double max_term;

    /// Bound on the oracle's own rounding error (generous term-count
    /// factor included).
    double own_error() const { return double(1e-17L * max_term); }
};

/// M(alpha, beta, x) by the raw long-double power series.
inline SeriesValue kummer_m_series(long double alpha, long double beta, long double x,
                                   int terms = 300) {
    long double term = 1.0L, sum = 1.0L, max_term = 1.0L;
    for (int n = 1; n <= terms; ++n) {
        term *= (alpha + n - 1) / (beta + n - 1) * x / n;
        sum += term;
        max_term = std::fmax(max_term, std::fabs(term));
        if (std::fabs(term) < 1e-25L * std::fabs(sum) && n > 4) break;
    }
    return SeriesValue{sum, max_term};
}

/// Frobenius solution rho^s sum c_k rho^k of
/// y'' + (1 - 2 eta / rho - l(l+1)/rho^2) y = 0, long double throughout.
inline SeriesValue coulomb_frobenius_series(long double l, long double eta, long double s,
                                            long double rho) {
    const long double mu = 2.0L * eta;
    long double cm2 = 0.0L, cm1 = 1.0L, sum = 1.0L, pw = 1.0L, max_term = 1.0L;
    for (int k = 1; k < 2000; ++k) {
        const long double denom = (s + k) * (s + k - 1) - l * (l + 1);
        const long double ck = (mu * cm1 - cm2) / denom;
        pw *= rho;
        const long double contrib = ck * pw;
        sum += contrib;
        max_term = std::fmax(max_term, std::fabs(contrib));
        if (std::fabs(contrib) < 1e-25L * std::fabs(sum) && k > 8) break;
        cm2 = cm1;
        cm1 = ck;
    }
    const long double pref = std::pow(rho, s);
    return SeriesValue{pref * sum, pref * max_term};
}

/// Ad(exp(eps X_i)) k via a dense matrix exponential of -eps ad(X_i).
inline powheat::Vec4 adjoint_expm(int i, double eps, const powheat::Generator& X) {
    const powheat::Mat4 A = -eps * powheat::ad_matrix(i, X.param);
    return powheat::Mat4(A.exp()) * X.k;
}

inline std::mt19937& rng() {
    static std::mt19937 gen(0x9e3779b9u);
    return gen;
}

inline double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng());
}

} // namespace oracles
