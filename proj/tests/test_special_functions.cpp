#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "powheat/special_functions.hpp"
#include "support/oracles.hpp"

using namespace powheat;
using oracles::uniform;

namespace {

/// Second derivative of a pair-producing evaluator by central differences
/// of the returned first derivative; independent of ode_second_derivative.
template <typename F>
double fd_second(F&& pair_at, double x, double h = 1e-5) {
    return (pair_at(x + h).deriv - pair_at(x - h).deriv) / (2 * h);
}

} // namespace

TEST_CASE("Bessel basics") {
    // J0 near zero approaches 1
    CHECK(bessel(BesselKind::J, 0.0, 1e-12).value == doctest::Approx(1.0).epsilon(1e-12));

    // half-order closed form J_{1/2}(x) = sqrt(2/(pi x)) sin x
    for (double x : {0.5, 1.0, 2.0}) {
        const double expect = std::sqrt(2.0 / (std::numbers::pi * x)) * std::sin(x);
        CHECK(bessel(BesselKind::J, 0.5, x).value == doctest::Approx(expect).epsilon(1e-10));
    }

    CHECK_THROWS(bessel(BesselKind::J, -1.0, 1.0));
    CHECK_THROWS(bessel(BesselKind::J, 0.0, -1.0));
}

TEST_CASE("Bessel Wronskians") {
    for (int rep = 0; rep < 50; ++rep) {
        const double nu = uniform(0.0, 4.0);
        const double x = uniform(0.1, 30.0);

        const double jy = bessel(BesselKind::J, nu, x).value * bessel_derivative(BesselKind::Y, nu, x) -
                          bessel_derivative(BesselKind::J, nu, x) * bessel(BesselKind::Y, nu, x).value;
        CHECK(jy == doctest::Approx(2.0 / (std::numbers::pi * x)).epsilon(1e-9));

        const double ik = bessel(BesselKind::I, nu, x).value * bessel_derivative(BesselKind::K, nu, x) -
                          bessel_derivative(BesselKind::I, nu, x) * bessel(BesselKind::K, nu, x).value;
        CHECK(ik == doctest::Approx(-1.0 / x).epsilon(1e-9));
    }
}

TEST_CASE("Kummer fixed values") {
    CHECK(kummer_m(0.7, 1.3, 0.0).value == 1.0);
    for (double x : {-3.0, -0.5, 0.2, 4.0})
        CHECK(kummer_m(0.0, 1.5, x).value == 1.0);
    // M(1,2,1) = e - 1
    CHECK(kummer_m(1.0, 2.0, 1.0).value ==
          doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-10));
    // M(a,b,x) = e^x M(b-a,b,-x): exercised internally for x < 0; compare
    // both signs against the extended-precision oracle below.
}

TEST_CASE("Kummer series vs extended-precision oracle with honest error bars") {
    for (int rep = 0; rep < 200; ++rep) {
        const double alpha = uniform(-3.0, 4.0);
        const double beta = uniform(0.3, 5.0);
        const double x = uniform(-8.0, 12.0);
        const SpecialValue v = kummer_m(alpha, beta, x);
        const oracles::SeriesValue oracle = oracles::kummer_m_series(alpha, beta, x);
        // the oracle's own cancellation error enters the tolerance
        CHECK(std::abs(double(v.value - oracle.value)) <=
              10.0 * v.abs_error + oracle.own_error());
    }
}

TEST_CASE("Coulomb regular reductions at eta = 0") {
    // l = 0, eta = 0: the equation is y'' + y = 0 and the regular branch is
    // proportional to sin(rho). Ratio constancy over [0.1, 10].
    {
        double ratio0 = coulomb_regular(0.0, 0.0, 1.0).value / std::sin(1.0);
        for (double rho = 0.1; rho <= 10.0; rho += 0.31) {
            const double r = coulomb_regular(0.0, 0.0, rho).value / std::sin(rho);
            CHECK(r == doctest::Approx(ratio0).epsilon(1e-9));
        }
    }

    // general l, eta = 0: proportional to sqrt(rho) J_{l+1/2}(rho);
    // ratio standard deviation over rho in [0.5, 10].
    for (double l : {0.5, 1.0, 1.7}) {
        std::vector<double> ratios;
        for (double rho = 0.5; rho <= 10.0; rho += 0.25) {
            const double ref = std::sqrt(rho) * bessel(BesselKind::J, l + 0.5, rho).value;
            ratios.push_back(coulomb_regular(l, 0.0, rho).value / ref);
        }
        double mean = 0.0;
        for (double r : ratios) mean += r;
        mean /= double(ratios.size());
        double var = 0.0;
        for (double r : ratios) var += (r - mean) * (r - mean);
        const double rel_sd = std::sqrt(var / double(ratios.size())) / std::abs(mean);
        CHECK(rel_sd <= 1e-8);
    }
}

TEST_CASE("Coulomb regular vs extended-precision Frobenius oracle") {
    for (int rep = 0; rep < 200; ++rep) {
        const double l = uniform(-0.45, 2.0);
        const double eta = uniform(-2.0, 2.0);
        const double rho = uniform(0.05, 18.0);
        const SpecialValue v = coulomb_regular(l, eta, rho);
        const oracles::SeriesValue oracle =
            oracles::coulomb_frobenius_series(l, eta, l + 1.0, rho);
        CHECK(std::abs(double(v.value - oracle.value)) <=
              10.0 * v.abs_error + oracle.own_error());
    }
}

TEST_CASE("log gamma") {
    CHECK(log_gamma(1.0).value == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(log_gamma(0.5).value ==
          doctest::Approx(0.5 * std::log(std::numbers::pi)).epsilon(1e-12));
    for (int rep = 0; rep < 30; ++rep) {
        const double x = uniform(0.2, 20.0);
        CHECK(log_gamma(x + 1.0).value - log_gamma(x).value - std::log(x) ==
              doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("pair evaluators satisfy their ODEs") {
    std::vector<OdeBasisSpec> specs = {
        OdeBasisSpec::bessel_ordinary(1.0),
        OdeBasisSpec::bessel_ordinary(1.0 / 3.0),
        OdeBasisSpec::bessel_modified(1.5),
        OdeBasisSpec::kummer(1.0, 2.0),        // integer beta: integration path
        OdeBasisSpec::kummer(-0.5, 1.0 / 3.0), // series path
        OdeBasisSpec::kummer(3.0, 2.5),
        OdeBasisSpec::coulomb(0.0, 0.0),
        OdeBasisSpec::coulomb(0.25, -0.5),
        OdeBasisSpec::coulomb(1.0, 1.5), // half-odd a -> integer 2l+1
    };
    for (const OdeBasisSpec& spec : specs) {
        for (int rep = 0; rep < 25; ++rep) {
            const double x = uniform(0.3, 25.0);
            for (auto pair : {&regular_pair, &irregular_pair}) {
                const OdeValue y = pair(spec, x);
                const double ypp =
                    fd_second([&](double s) { return pair(spec, s); }, x,
                              1e-4 * std::max(1.0, x));
                // FD-vs-exact second derivative: the residual oracle
                const double implied = ode_second_derivative(spec, x, y.value, y.deriv);
                const double scale =
                    std::max({std::abs(ypp), std::abs(implied), std::abs(y.value), 1e-30});
                CHECK(std::abs(ypp - implied) / scale <= 1e-5);
                // exact residual with the implied second derivative
                CHECK(std::abs(ode_residual(spec, x, y.value, y.deriv, implied)) <= 1e-9);
            }
        }
    }
}

TEST_CASE("ODE residuals across the reduction parameter matrix") {
    // (l, eta) = ((a-1)/2, mu/2) for a in {1/3, 2, 5/2}, mu in {-1, 0, 3}
    for (double a : {1.0 / 3.0, 2.0, 2.5}) {
        for (double mu : {-1.0, 0.0, 3.0}) {
            const OdeBasisSpec spec = OdeBasisSpec::coulomb_from_reduction(a, mu);
            for (int rep = 0; rep < 100; ++rep) {
                const double rho = uniform(0.2, 22.0);
                const OdeValue y = regular_pair(spec, rho);
                const double ypp =
                    ode_second_derivative(spec, rho, y.value, y.deriv);
                const double fd =
                    fd_second([&](double s) { return regular_pair(spec, s); }, rho,
                              1e-4 * std::max(1.0, rho));
                const double scale = std::max({std::abs(ypp), std::abs(y.value), 1e-30});
                CHECK(std::abs(fd - ypp) / scale <= 2e-5);
            }
        }
    }
}

TEST_CASE("irregular companions") {
    SUBCASE("Bessel dispatch matches bessel() exactly") {
        const OdeBasisSpec so = OdeBasisSpec::bessel_ordinary(0.75);
        const OdeBasisSpec sm = OdeBasisSpec::bessel_modified(0.75);
        for (double x : {0.4, 1.0, 7.0}) {
            CHECK(second_solution(so, x).value == bessel(BesselKind::Y, 0.75, x).value);
            CHECK(second_solution(sm, x).value == bessel(BesselKind::K, 0.75, x).value);
        }
    }

    SUBCASE("Coulomb l=0 eta=0: sin/cos pair, unit Wronskian") {
        const OdeBasisSpec spec = OdeBasisSpec::coulomb(0.0, 0.0);
        for (double rho = 0.1; rho <= 20.0; rho += 0.83) {
            const OdeValue r = regular_pair(spec, rho);
            const OdeValue i = irregular_pair(spec, rho);
            const double w = r.deriv * i.value - r.value * i.deriv;
            CHECK(w == doctest::Approx(1.0).epsilon(1e-8));
        }
    }

    SUBCASE("Kummer integer-beta companion is finite and normalized") {
        const OdeBasisSpec spec = OdeBasisSpec::kummer(1.0, 2.0);
        for (double x : {0.5, 1.0, 3.0, 10.0}) {
            const OdeValue r = regular_pair(spec, x);
            const OdeValue i = irregular_pair(spec, x);
            CHECK(std::isfinite(i.value));
            const double w = std::pow(x, spec.beta) * std::exp(-x) *
                             (r.deriv * i.value - r.value * i.deriv);
            CHECK(w == doctest::Approx(1.0).epsilon(1e-7));
        }
    }

    SUBCASE("weighted Wronskian is 1 on both parameter paths") {
        for (const OdeBasisSpec& spec :
             {OdeBasisSpec::kummer(-0.3, 1.7), OdeBasisSpec::kummer(2.0, 3.0),
              OdeBasisSpec::coulomb(0.3, 0.7), OdeBasisSpec::coulomb(1.0, -0.4)}) {
            for (double x : {0.5, 2.0, 8.0, 15.0}) {
                const OdeValue r = regular_pair(spec, x);
                const OdeValue i = irregular_pair(spec, x);
                double w = r.deriv * i.value - r.value * i.deriv;
                if (spec.family == OdeFamily::Kummer)
                    w *= std::pow(x, spec.beta) * std::exp(-x);
                CHECK(w == doctest::Approx(1.0).epsilon(1e-7));
            }
        }
    }

    SUBCASE("evaluation below xi_min rejected") {
        CHECK_THROWS_AS(irregular_pair(OdeBasisSpec::coulomb(1.0, 0.0), 1e-9), DomainError);
    }
}
