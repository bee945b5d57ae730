#pragma once

#include <memory>
#include <variant>
#include <vector>

#include "powheat/lie_algebra.hpp"
#include "powheat/report.hpp"
#include "powheat/special_functions.hpp"
#include "powheat/transforms.hpp"

namespace powheat {

/// u = C1 x + C2 (includes the trivial solution u = 0).
struct StationaryData {
    double c1;
    double c2;
};

enum class SeparableSign { Plus, Minus };

/// u = e^(sign kappa^2 t) xi^a y(xi), xi = 2 kappa a x^(1/2a);
/// y from the modified (sign +) or ordinary (sign -) Bessel pair.
struct SeparableData {
    SeparableSign sign;
    double kappa;
    double c_reg;
    double c_irr;
};

/// u = t^mu xi^a e^(-xi) y(xi), xi = a^2 x^(1/a) / t, t > 0;
/// y from the Kummer pair with alpha = 1+mu, beta = 1+a.
struct ScaleInvariantData {
    double mu;
    double c_reg;
    double c_irr;
};

/// u = (a x^(1/2a))^(a-1) exp(mu arctan t - xi t) y(xi),
/// xi = a^2 x^(1/a) / (1+t^2); y from the Coulomb pair with
/// l = (a-1)/2, eta = mu/2.
struct ProjectiveData {
    double mu;
    double c_reg;
    double c_irr;
};

class SolutionDescriptor;

struct WeightedPart {
    double weight;
    std::shared_ptr<const SolutionDescriptor> part;
};

struct SuperpositionData {
    std::vector<WeightedPart> parts;
};

/// Immutable description of an exact solution: a base variant plus an
/// ordered list of group flows applied to it.
class SolutionDescriptor {
public:
    using Variant = std::variant<StationaryData, SeparableData, ScaleInvariantData,
                                 ProjectiveData, SuperpositionData>;

    SolutionDescriptor(PowerLawParameter p, Variant data, Domain base_domain,
                       std::vector<FlowStep> flows = {});

    const PowerLawParameter& param() const { return param_; }
    const Variant& data() const { return data_; }
    const std::vector<FlowStep>& flows() const { return flows_; }
    /// Domain of the fully transformed solution.
    const Domain& domain() const { return domain_; }
    /// Domain of the base variant before any flows.
    const Domain& base_domain() const { return base_domain_; }

    SolutionDescriptor with_flow(const FlowStep& step) const;

private:
    PowerLawParameter param_;
    Variant data_;
    Domain base_domain_;
    std::vector<FlowStep> flows_;
    Domain domain_;
};

SolutionDescriptor make_stationary(PowerLawParameter p, double c1, double c2);
SolutionDescriptor make_separable(PowerLawParameter p, SeparableSign sign, double kappa,
                                  double c_reg, double c_irr);
SolutionDescriptor make_scale_invariant(PowerLawParameter p, double mu, double c_reg,
                                        double c_irr);
SolutionDescriptor make_projective(PowerLawParameter p, double mu, double c_reg,
                                   double c_irr);
SolutionDescriptor superpose(const std::vector<std::pair<double, SolutionDescriptor>>& parts);

/// u(t,x) with the propagated absolute error of the special-function calls.
SpecialValue evaluate(const SolutionDescriptor& sol, double t, double x);

struct GridRow {
    double t;
    double x;
    double u;
    double abs_error;
};

/// Row-major (t outer, x inner) evaluation over a uniform grid. The
/// POWHEAT_THREADS environment variable caps internal parallelism; output
/// ordering is deterministic regardless.
std::vector<GridRow> evaluate_grid(const SolutionDescriptor& sol, const GridSpec& grid);

/// Generator whose invariant surface condition the base variant satisfies
/// (e.g. X2 + mu X4 for the scale-invariant family).
Generator invariant_generator(const SolutionDescriptor& sol);

const char* variant_name(const SolutionDescriptor& sol);

} // namespace powheat
