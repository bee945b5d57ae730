#pragma once

#include <limits>

#include "powheat/lie_algebra.hpp"
#include "powheat/report.hpp"

namespace powheat {

class SolutionDescriptor;

/// One finite group transformation: exp(eps X) for a generator X.
/// Flows with a nonzero X3 component are subject to the reach condition
/// 1 - eps*k3*t > 0 over the evaluation domain.
struct FlowStep {
    Generator generator;
    double eps;

    FlowStep(Generator g, double e) : generator(std::move(g)), eps(e) {
        if (!std::isfinite(eps))
            throw std::invalid_argument("FlowStep: eps must be finite");
    }

    FlowStep inverse() const { return FlowStep(generator, -eps); }
};

struct PointState {
    double t;
    double x;
    double u;
};

/// Open t-interval on which a solution may be evaluated (x > 0 always).
struct Domain {
    double t_lo = -std::numeric_limits<double>::infinity();
    double t_hi = std::numeric_limits<double>::infinity();

    bool contains_t(double t) const { return t > t_lo && t < t_hi; }
    Domain intersect(const Domain& o) const {
        return Domain{std::max(t_lo, o.t_lo), std::min(t_hi, o.t_hi)};
    }
    bool empty() const { return !(t_lo < t_hi); }
};

/// Applies the finite flow to a point. Basis generators (a single
/// nonzero coefficient) use the closed forms; mixed generators integrate
/// the characteristic ODEs dt/ds = tau, dx/ds = xi, du/ds = V u.
PointState flow_point(const FlowStep& step, PointState p);

/// Always-numeric characteristic integration; oracle path for the
/// closed-form basis flows.
PointState flow_point_numeric(const FlowStep& step, PointState p, double rtol = 1e-10);

/// Best-effort image of an open t-interval under the flow's t-map.
/// Throws DomainError if the image is empty.
Domain map_domain(const FlowStep& step, const Domain& d);

/// Transports a solution through the flow: the result evaluates the base
/// solution at the inverse-flowed point and applies the flow's
/// u-multiplier. Composition concatenates flows.
SolutionDescriptor pushforward(const SolutionDescriptor& sol, const FlowStep& step);

/// Residual report of the pushforward on the grid.
ResidualReport verify_transformed(const SolutionDescriptor& sol, const FlowStep& step,
                                  const GridSpec& grid, double tolerance = 1e-6);

} // namespace powheat
