#include "powheat/transforms.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "powheat/ode.hpp"
#include "powheat/solutions.hpp"
#include "powheat/verify.hpp"

namespace powheat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Infinite endpoints of generic (mixed-generator) flows are clamped here
// before the 1-D characteristic integration; quadratic tau compresses
// everything beyond the cap into a negligible sliver of the image.
constexpr double kTimeCap = 1e4;

/// Index of the single nonzero coefficient (1-based), or 0 for mixed.
int single_basis_index(const Vec4& k) {
    int idx = 0;
    for (int j = 0; j < 4; ++j) {
        if (k(j) != 0.0) {
            if (idx != 0) return 0;
            idx = j + 1;
        }
    }
    return idx;
}

PointState flow_basis(int i, double e, double a, PointState p) {
    switch (i) {
    case 1:
        return PointState{p.t + e, p.x, p.u};
    case 2:
        return PointState{std::exp(e) * p.t, std::exp(a * e) * p.x, p.u};
    case 3: {
        const double r = 1.0 - e * p.t;
        if (!(r > 0.0))
            throw DomainError(DomainError::Bound::Reach,
                              "flow_point: reach condition 1 - eps*t > 0 violated (eps*t = " +
                                  std::to_string(e * p.t) + ")");
        const double xq = std::pow(p.x, 1.0 / a);
        return PointState{p.t / r, p.x * std::pow(r, -2.0 * a),
                          p.u * std::pow(r, 1.0 - a) * std::exp(-e * a * a * xq / r)};
    }
    case 4:
        return PointState{p.t, p.x, std::exp(e) * p.u};
    }
    throw std::logic_error("flow_basis: bad index");
}

} // namespace

PointState flow_point_numeric(const FlowStep& step, PointState p, double rtol) {
    if (!(p.x > 0.0))
        throw DomainError(DomainError::Bound::XMin, "flow_point: x must be positive");
    if (step.eps == 0.0) return p;
    const InfinitesimalCoefficients c = infinitesimals(step.generator);
    auto rhs = [&c](double /*s*/, const Eigen::Vector3d& y) {
        return Eigen::Vector3d(c.tau(y(0)), c.xi(y(0), y(1)), c.v(y(0), y(1)) * y(2));
    };
    Eigen::Vector3d y0(p.t, p.x, 1.0);
    Eigen::Vector3d y;
    try {
        y = integrate_ode<3>(rhs, 0.0, step.eps, y0, rtol, 1e-14);
    } catch (const std::runtime_error&) {
        throw DomainError(DomainError::Bound::Reach,
                          "flow_point: characteristic trajectory leaves the reachable set");
    }
    return PointState{y(0), y(1), y(2) * p.u};
}

PointState flow_point(const FlowStep& step, PointState p) {
    if (!(p.x > 0.0))
        throw DomainError(DomainError::Bound::XMin, "flow_point: x must be positive");
    if (step.eps == 0.0) return p;
    const int i = single_basis_index(step.generator.k);
    if (i != 0) {
        const double e = step.eps * step.generator.k(i - 1);
        return flow_basis(i, e, step.generator.param.value(), p);
    }
    return flow_point_numeric(step, p);
}

namespace {

/// t-component of the flow, extended to infinite endpoints; returns the
/// image or throws on reach violation.
double map_time(const FlowStep& step, double t) {
    const int i = single_basis_index(step.generator.k);
    const double a = step.generator.param.value();
    if (i != 0) {
        const double e = step.eps * step.generator.k(i - 1);
        switch (i) {
        case 1:
            return std::isinf(t) ? t : t + e;
        case 2:
            return std::isinf(t) ? t : std::exp(e) * t;
        case 4:
            return t;
        case 3: {
            if (e == 0.0) return t;
            if (std::isinf(t)) {
                // limits of t/(1-et) on the reachable branch
                if (t < 0.0 && e > 0.0) return -1.0 / e;
                if (t > 0.0 && e < 0.0) return -1.0 / e;
                throw DomainError(DomainError::Bound::Reach, "map_domain: endpoint unreachable");
            }
            return flow_basis(3, e, a, PointState{t, 1.0, 0.0}).t;
        }
        }
    }
    // Generic flow: integrate dt/ds = tau(t) from a clamped endpoint.
    const InfinitesimalCoefficients c = infinitesimals(step.generator);
    double t0 = std::clamp(t, -kTimeCap, kTimeCap);
    auto rhs = [&c](double, const Eigen::Matrix<double, 1, 1>& y) {
        return Eigen::Matrix<double, 1, 1>(c.tau(y(0)));
    };
    Eigen::Matrix<double, 1, 1> y0;
    y0 << t0;
    try {
        auto y = integrate_ode<1>(rhs, 0.0, step.eps, y0, 1e-10, 1e-12);
        const double v = y(0);
        if (v > 0.1 * kTimeCap) return kInf;
        if (v < -0.1 * kTimeCap) return -kInf;
        return v;
    } catch (const std::runtime_error&) {
        throw DomainError(DomainError::Bound::Reach,
                          "map_domain: endpoint trajectory blows up in finite parameter");
    }
}

} // namespace

Domain map_domain(const FlowStep& step, const Domain& d) {
    Domain allowed = d;
    const int i = single_basis_index(step.generator.k);
    bool hi_at_reach = false, lo_at_reach = false;
    if (i == 3) {
        // Restrict to the branch where 1 - e t > 0 before mapping.
        const double e = step.eps * step.generator.k(2);
        if (e > 0.0 && 1.0 / e <= allowed.t_hi) {
            allowed.t_hi = 1.0 / e;
            hi_at_reach = true; // open endpoint at the pole maps to +inf
        }
        if (e < 0.0 && 1.0 / e >= allowed.t_lo) {
            allowed.t_lo = 1.0 / e;
            lo_at_reach = true; // maps to -inf
        }
    }
    if (allowed.empty())
        throw DomainError(DomainError::Bound::Reach, "pushforward: empty resulting domain");
    if (hi_at_reach || lo_at_reach) {
        Domain out;
        out.t_lo = lo_at_reach ? -kInf : map_time(step, allowed.t_lo);
        out.t_hi = hi_at_reach ? kInf : map_time(step, allowed.t_hi);
        return out;
    }

    Domain out;
    bool lo_ok = true, hi_ok = true;
    try {
        out.t_lo = map_time(step, allowed.t_lo);
    } catch (const DomainError&) {
        lo_ok = false;
    }
    try {
        out.t_hi = map_time(step, allowed.t_hi);
    } catch (const DomainError&) {
        hi_ok = false;
    }
    if (!lo_ok && !hi_ok)
        throw DomainError(DomainError::Bound::Reach, "pushforward: empty resulting domain");
    // A failed endpoint for a generic flow means the trajectory escaped:
    // shrink toward the surviving side by bisection.
    if (!lo_ok || !hi_ok) {
        double good = lo_ok ? allowed.t_lo : allowed.t_hi;
        double bad = lo_ok ? allowed.t_hi : allowed.t_lo;
        good = std::clamp(good, -kTimeCap, kTimeCap);
        bad = std::clamp(bad, -kTimeCap, kTimeCap);
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (good + bad);
            try {
                map_time(step, mid);
                good = mid;
            } catch (const DomainError&) {
                bad = mid;
            }
        }
        if (lo_ok)
            out.t_hi = map_time(step, good);
        else
            out.t_lo = map_time(step, good);
    }
    if (out.empty())
        throw DomainError(DomainError::Bound::Reach, "pushforward: empty resulting domain");
    return out;
}

SolutionDescriptor pushforward(const SolutionDescriptor& sol, const FlowStep& step) {
    return sol.with_flow(step);
}

ResidualReport verify_transformed(const SolutionDescriptor& sol, const FlowStep& step,
                                  const GridSpec& grid, double tolerance) {
    return residual_report(pushforward(sol, step), grid, tolerance);
}

} // namespace powheat
