#include <doctest.h>

#include <cmath>

#include "powheat/lie_algebra.hpp"
#include "support/oracles.hpp"

using namespace powheat;
using oracles::uniform;

namespace {

Generator random_generator(PowerLawParameter p, double lo = -2.0, double hi = 2.0) {
    Vec4 k;
    for (int i = 0; i < 4; ++i) k(i) = uniform(lo, hi);
    return Generator(k, p);
}

const double kAValues[] = {1.0 / 3.0, 2.0 / 3.0, 1.0, 1.5, 2.5};

} // namespace

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(PowerLawParameter(0.5), std::invalid_argument);
    CHECK_THROWS_AS(PowerLawParameter(0.0), std::invalid_argument);
    CHECK_THROWS_AS(PowerLawParameter(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(PowerLawParameter(std::nan("")), std::invalid_argument);
    CHECK(PowerLawParameter(1.0).is_unit());
    CHECK(PowerLawParameter(2.0).diffusivity_exponent() == 1.5);
}

TEST_CASE("commutator table") {
    for (double a : kAValues) {
        PowerLawParameter p(a);
        auto X = [&](int i) { return Generator::basis(i, p); };

        // [X1,X2] = X1, [X1,X3] = 2 X2 + (a-1) X4, [X2,X3] = X3, rest zero.
        CHECK(commutator(X(1), X(2)).k == Vec4(1, 0, 0, 0));
        CHECK(commutator(X(1), X(3)).k == Vec4(0, 2, 0, a - 1.0));
        CHECK(commutator(X(2), X(3)).k == Vec4(0, 0, 1, 0));
        for (int i = 1; i <= 4; ++i) {
            CHECK(commutator(X(i), X(4)).k == Vec4::Zero());
            CHECK(commutator(X(i), X(i)).k == Vec4::Zero());
        }

        // antisymmetry on random elements (exact: same products, negated)
        for (int rep = 0; rep < 20; ++rep) {
            Generator A = random_generator(p), B = random_generator(p);
            CHECK(commutator(A, B).k == (-commutator(B, A).k).eval());
        }
    }
}

TEST_CASE("algebra decomposes at a = 1") {
    PowerLawParameter p(1.0);
    Generator c = commutator(Generator::basis(1, p), Generator::basis(3, p));
    CHECK(c.k == Vec4(0, 2, 0, 0)); // no vertical component
}

TEST_CASE("Jacobi identity") {
    for (double a : kAValues) {
        PowerLawParameter p(a);
        for (int rep = 0; rep < 50; ++rep) {
            Generator A = random_generator(p), B = random_generator(p),
                      C = random_generator(p);
            Vec4 j = commutator(A, commutator(B, C)).k +
                     commutator(B, commutator(C, A)).k +
                     commutator(C, commutator(A, B)).k;
            CHECK(j.cwiseAbs().maxCoeff() <= 1e-14 * (A.k.norm() * B.k.norm() * C.k.norm()));
        }
    }
}

TEST_CASE("commutator rejects mismatched parameters") {
    Generator A = Generator::basis(1, PowerLawParameter(1.0));
    Generator B = Generator::basis(2, PowerLawParameter(2.0));
    CHECK_THROWS_AS(commutator(A, B), ParameterMismatch);
}

TEST_CASE("ad matrix columns are basis brackets") {
    for (double a : {2.0 / 3.0, 1.0, 2.0}) {
        PowerLawParameter p(a);
        for (int i = 1; i <= 4; ++i) {
            Mat4 M = ad_matrix(i, p);
            for (int j = 1; j <= 4; ++j) {
                Vec4 col = commutator(Generator::basis(i, p), Generator::basis(j, p)).k;
                CHECK((M.col(j - 1) - col).cwiseAbs().maxCoeff() == 0.0);
            }
        }
    }
}

TEST_CASE("adjoint closed forms: fixed examples") {
    PowerLawParameter p(3.0);
    const double a = 3.0;

    // X4 is central: any adjoint step fixes every element.
    for (int rep = 0; rep < 10; ++rep) {
        Generator X = random_generator(p);
        CHECK(adjoint_coefficients(4, uniform(-3, 3), X).k == X.k);
    }

    // Ad(exp(eps X1)) X3 = (eps^2, -2 eps, 1, -eps (a-1))
    const double eps = 0.7;
    Generator r = adjoint_coefficients(1, eps, Generator::basis(3, p));
    CHECK(r.k(0) == doctest::Approx(eps * eps).epsilon(1e-14));
    CHECK(r.k(1) == doctest::Approx(-2 * eps).epsilon(1e-14));
    CHECK(r.k(2) == 1.0);
    CHECK(r.k(3) == doctest::Approx(-eps * (a - 1)).epsilon(1e-14));

    // Ad(exp(eps X2)) X1 = e^eps X1
    Generator s = adjoint_coefficients(2, eps, Generator::basis(1, p));
    CHECK(s.k(0) == doctest::Approx(std::exp(eps)).epsilon(1e-15));
    CHECK(s.k.tail<3>().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("adjoint closed forms agree with matrix-exponential oracle") {
    for (double a : kAValues) {
        PowerLawParameter p(a);
        for (int i = 1; i <= 4; ++i) {
            for (int rep = 0; rep < 40; ++rep) {
                Generator X = random_generator(p);
                const double eps = uniform(-1.5, 1.5);
                Vec4 closed = adjoint_coefficients(i, eps, X).k;
                Vec4 expm = oracles::adjoint_expm(i, eps, X);
                Vec4 series = adjoint_series(i, eps, X).k;
                const double scale = std::max(1.0, closed.norm());
                CHECK((closed - expm).cwiseAbs().maxCoeff() <= 1e-12 * scale);
                CHECK((closed - series).cwiseAbs().maxCoeff() <= 1e-12 * scale);
            }
        }
    }
}

TEST_CASE("adjoint invariants: fixed values") {
    PowerLawParameter p2(2.0);
    CHECK(invariants(Generator(Vec4(0, 1, 0, 0), p2)).phi1 == 1.0);
    CHECK(invariants(Generator(Vec4(1, 0, 1, 0), p2)).phi1 == -4.0);
    CHECK(invariants(Generator(Vec4(0, 0, 0, 5), PowerLawParameter(1.0))).phi2 == 5.0);
    // general a: phi2 = k2 + 2 k4 / (1-a)
    CHECK(invariants(Generator(Vec4(0, 3, 0, 2), p2)).phi2 ==
          doctest::Approx(3.0 - 4.0).epsilon(1e-15));
}

TEST_CASE("adjoint invariants preserved under random compositions") {
    for (double a : {1.0, 1.0 / 3.0, 2.5}) {
        PowerLawParameter p(a);
        for (int rep = 0; rep < 300; ++rep) {
            Generator X = random_generator(p);
            AdjointInvariants before = invariants(X);
            Generator Y = X;
            for (int s = 0; s < 5; ++s)
                Y = adjoint_coefficients(1 + int(oracles::rng()() % 4), uniform(-1, 1), Y);
            AdjointInvariants after = invariants(Y);
            const double scale = std::max(1.0, X.k.squaredNorm());
            CHECK(std::abs(after.phi1 - before.phi1) <= 1e-10 * scale);
            CHECK(std::abs(after.phi2 - before.phi2) <= 1e-10 * scale);
        }
    }
}

TEST_CASE("adjoint map rescale covariance") {
    PowerLawParameter p(1.5);
    for (int rep = 0; rep < 20; ++rep) {
        Generator X = random_generator(p);
        AdjointMap m;
        for (int s = 0; s < 3; ++s)
            m.steps.push_back(AdjointStep{1 + int(oracles::rng()() % 4), uniform(-1, 1)});
        m.rescale = uniform(0.2, 3.0);
        Vec4 once = apply(m, X).k;
        AdjointMap unit = m;
        unit.rescale = 1.0;
        Vec4 steps_only = apply(unit, X).k;
        CHECK((once - m.rescale * steps_only).cwiseAbs().maxCoeff() <= 1e-14 * once.norm());
    }
}

TEST_CASE("classify: canonical and fixed inputs") {
    PowerLawParameter p2(2.0);

    Classification scaling = classify(Generator(Vec4(0, 1, 0, 0), p2));
    CHECK(scaling.cls.tag == OptimalTag::Scaling);
    CHECK(*scaling.cls.mu == 0.0);
    CHECK(scaling.map.is_identity());

    Classification proj = classify(Generator(Vec4(1, 0, 1, 0), p2));
    CHECK(proj.cls.tag == OptimalTag::Projective);
    CHECK(*proj.cls.mu == doctest::Approx(0.0).epsilon(1e-12));

    Classification trans = classify(Generator(Vec4(0, 0, 1, 0), p2));
    CHECK(trans.cls.tag == OptimalTag::Translation);
    CHECK(*trans.cls.mu == doctest::Approx(0.0).epsilon(1e-12));

    Classification vert = classify(Generator(Vec4(0, 0, 0, 2), p2));
    CHECK(vert.cls.tag == OptimalTag::Vertical);
    CHECK_FALSE(vert.cls.mu.has_value());

    CHECK(classify(Generator::zero(p2)).cls.tag == OptimalTag::Zero);
}

TEST_CASE("classify: returned map realizes the representative") {
    for (double a : kAValues) {
        PowerLawParameter p(a);
        for (int rep = 0; rep < 200; ++rep) {
            Generator X = random_generator(p);
            Classification c = classify(X);
            Generator mapped = apply(c.map, X);
            Generator target = c.cls.representative(p);
            CHECK((mapped.k - target.k).cwiseAbs().maxCoeff() <= 1e-9);
        }
    }
}

TEST_CASE("classify is idempotent on canonical forms") {
    for (double a : {2.0 / 3.0, 1.0, 1.5}) {
        PowerLawParameter p(a);
        for (double mu : {-1.5, 0.0, 2.0}) {
            for (OptimalTag tag :
                 {OptimalTag::Translation, OptimalTag::Scaling, OptimalTag::Projective}) {
                Generator X = OptimalClass{tag, mu}.representative(p);
                Classification c = classify(X);
                CHECK(c.cls.tag == tag);
                CHECK(*c.cls.mu == doctest::Approx(mu).epsilon(1e-12));
                CHECK(c.map.is_identity());
            }
        }
        Classification v = classify(OptimalClass{OptimalTag::Vertical, {}}.representative(p));
        CHECK(v.cls.tag == OptimalTag::Vertical);
        CHECK(v.map.is_identity());
    }
}

TEST_CASE("determining equations") {
    std::vector<std::pair<double, double>> samples;
    for (int i = 0; i < 100; ++i) samples.emplace_back(uniform(0.1, 10), uniform(0.1, 10));

    SUBCASE("X2 solves the system by construction") {
        Generator X2 = Generator::basis(2, PowerLawParameter(2.0));
        ResidualReport rep = check_determining_equations(X2, samples, 1e-12);
        CHECK(rep.pass);
        CHECK(rep.max_abs < 1e-12);
    }

    SUBCASE("X3 at a = 1/3") {
        Generator X3 = Generator::basis(3, PowerLawParameter(1.0 / 3.0));
        ResidualReport rep = check_determining_equations(X3, samples, 1e-10);
        CHECK(rep.pass);
        CHECK(rep.max_abs < 1e-10);
    }

    SUBCASE("all basis generators and random elements") {
        for (double a : kAValues) {
            PowerLawParameter p(a);
            for (int i = 1; i <= 4; ++i)
                CHECK(check_determining_equations(Generator::basis(i, p), samples).pass);
            for (int rep = 0; rep < 20; ++rep)
                CHECK(check_determining_equations(random_generator(p), samples).pass);
        }
    }

    SUBCASE("x = 0 sample rejected") {
        Generator X = Generator::basis(1, PowerLawParameter(1.0));
        CHECK_THROWS_AS(check_determining_equations(X, {{1.0, 0.0}}), DomainError);
    }
}
