#include "powheat/solutions.hpp"

#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace powheat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_coefficients(double c_reg, double c_irr) {
    if (!std::isfinite(c_reg) || !std::isfinite(c_irr))
        throw std::invalid_argument("solution: coefficients must be finite");
    if (c_reg == 0.0 && c_irr == 0.0)
        throw std::invalid_argument(
            "solution: c_reg and c_irr must not both be zero (use Stationary(0,0) for u = 0)");
}

SpecialValue combine_pair(const OdeValue& reg, const OdeValue& irr, double c_reg,
                          double c_irr, double prefactor) {
    const double y = c_reg * reg.value + c_irr * irr.value;
    const double u = prefactor * y;
    const double err = std::abs(prefactor) *
                           (std::abs(c_reg) * reg.abs_error + std::abs(c_irr) * irr.abs_error) +
                       2e-15 * std::abs(u);
    return SpecialValue{u, err};
}

SpecialValue evaluate_base(const SolutionDescriptor& sol, double t, double x);

struct BaseEvaluator {
    const SolutionDescriptor& sol;
    double t;
    double x;

    SpecialValue operator()(const StationaryData& d) const {
        const double u = d.c1 * x + d.c2;
        return SpecialValue{u, 2e-16 * (std::abs(d.c1 * x) + std::abs(d.c2))};
    }

    SpecialValue operator()(const SeparableData& d) const {
        const double a = sol.param().value();
        const double xi = 2.0 * d.kappa * a * std::pow(x, 1.0 / (2.0 * a));
        if (d.c_irr != 0.0 && xi < kXiMin)
            throw DomainError(DomainError::Bound::XiMin,
                              "separable: irregular branch below xi_min");
        const OdeBasisSpec spec = d.sign == SeparableSign::Plus
                                      ? OdeBasisSpec::bessel_modified(a)
                                      : OdeBasisSpec::bessel_ordinary(a);
        const OdeValue reg = regular_pair(spec, xi);
        const OdeValue irr = d.c_irr != 0.0 ? irregular_pair(spec, xi) : OdeValue{0, 0, 0};
        const double s = d.sign == SeparableSign::Plus ? 1.0 : -1.0;
        const double pref = std::exp(s * d.kappa * d.kappa * t) * std::pow(xi, a);
        return combine_pair(reg, irr, d.c_reg, d.c_irr, pref);
    }

    SpecialValue operator()(const ScaleInvariantData& d) const {
        if (!(t > 0.0))
            throw DomainError(DomainError::Bound::TMin,
                              "scale_invariant: defined for t > 0 only");
        const double a = sol.param().value();
        const double xi = a * a * std::pow(x, 1.0 / a) / t;
        if (d.c_irr != 0.0 && xi < kXiMin)
            throw DomainError(DomainError::Bound::XiMin,
                              "scale_invariant: irregular branch below xi_min");
        const OdeBasisSpec spec = OdeBasisSpec::kummer(1.0 + d.mu, 1.0 + a);
        const OdeValue reg = regular_pair(spec, xi);
        const OdeValue irr = d.c_irr != 0.0 ? irregular_pair(spec, xi) : OdeValue{0, 0, 0};
        const double pref = std::pow(t, d.mu) * std::pow(xi, a) * std::exp(-xi);
        return combine_pair(reg, irr, d.c_reg, d.c_irr, pref);
    }

    SpecialValue operator()(const ProjectiveData& d) const {
        const double a = sol.param().value();
        const double xi = a * a * std::pow(x, 1.0 / a) / (1.0 + t * t);
        if (d.c_irr != 0.0 && xi < kXiMin)
            throw DomainError(DomainError::Bound::XiMin,
                              "projective: irregular branch below xi_min");
        const OdeBasisSpec spec = OdeBasisSpec::coulomb_from_reduction(a, d.mu);
        const OdeValue reg = regular_pair(spec, xi);
        const OdeValue irr = d.c_irr != 0.0 ? irregular_pair(spec, xi) : OdeValue{0, 0, 0};
        const double pref = std::pow(a * std::pow(x, 1.0 / (2.0 * a)), a - 1.0) *
                            std::exp(d.mu * std::atan(t) - xi * t);
        return combine_pair(reg, irr, d.c_reg, d.c_irr, pref);
    }

    SpecialValue operator()(const SuperpositionData& d) const {
        double u = 0.0, err = 0.0;
        for (const WeightedPart& p : d.parts) {
            const SpecialValue v = evaluate(*p.part, t, x);
            u += p.weight * v.value;
            err += std::abs(p.weight) * v.abs_error;
        }
        return SpecialValue{u, err + 2e-16 * std::abs(u) * double(d.parts.size())};
    }
};

SpecialValue evaluate_base(const SolutionDescriptor& sol, double t, double x) {
    return std::visit(BaseEvaluator{sol, t, x}, sol.data());
}

} // namespace

SolutionDescriptor::SolutionDescriptor(PowerLawParameter p, Variant data, Domain base_domain,
                                       std::vector<FlowStep> flows)
    : param_(p), data_(std::move(data)), base_domain_(base_domain),
      flows_(std::move(flows)), domain_(base_domain_) {
    for (const FlowStep& s : flows_) {
        if (!(s.generator.param == param_))
            throw ParameterMismatch("SolutionDescriptor: flow parameter mismatch");
        domain_ = map_domain(s, domain_);
    }
}

SolutionDescriptor SolutionDescriptor::with_flow(const FlowStep& step) const {
    std::vector<FlowStep> fl = flows_;
    fl.push_back(step);
    return SolutionDescriptor(param_, data_, base_domain_, std::move(fl));
}

SolutionDescriptor make_stationary(PowerLawParameter p, double c1, double c2) {
    if (!std::isfinite(c1) || !std::isfinite(c2))
        throw std::invalid_argument("make_stationary: coefficients must be finite");
    return SolutionDescriptor(p, StationaryData{c1, c2}, Domain{});
}

SolutionDescriptor make_separable(PowerLawParameter p, SeparableSign sign, double kappa,
                                  double c_reg, double c_irr) {
    if (!(kappa > 0.0))
        throw std::invalid_argument("make_separable: kappa must be positive");
    check_coefficients(c_reg, c_irr);
    return SolutionDescriptor(p, SeparableData{sign, kappa, c_reg, c_irr}, Domain{});
}

SolutionDescriptor make_scale_invariant(PowerLawParameter p, double mu, double c_reg,
                                        double c_irr) {
    if (!std::isfinite(mu))
        throw std::invalid_argument("make_scale_invariant: mu must be finite");
    check_coefficients(c_reg, c_irr);
    return SolutionDescriptor(p, ScaleInvariantData{mu, c_reg, c_irr}, Domain{0.0, kInf});
}

SolutionDescriptor make_projective(PowerLawParameter p, double mu, double c_reg,
                                   double c_irr) {
    if (!std::isfinite(mu))
        throw std::invalid_argument("make_projective: mu must be finite");
    check_coefficients(c_reg, c_irr);
    return SolutionDescriptor(p, ProjectiveData{mu, c_reg, c_irr}, Domain{});
}

SolutionDescriptor superpose(const std::vector<std::pair<double, SolutionDescriptor>>& parts) {
    if (parts.empty())
        throw std::invalid_argument("superpose: empty part list");
    const PowerLawParameter p = parts.front().second.param();
    Domain dom;
    SuperpositionData data;
    for (const auto& [w, sol] : parts) {
        if (!(sol.param() == p))
            throw ParameterMismatch("superpose: parts carry different parameters a");
        if (!std::isfinite(w))
            throw std::invalid_argument("superpose: weights must be finite");
        dom = dom.intersect(sol.domain());
        data.parts.push_back(WeightedPart{w, std::make_shared<SolutionDescriptor>(sol)});
    }
    if (dom.empty())
        throw DomainError(DomainError::Bound::TMin, "superpose: empty common domain");
    return SolutionDescriptor(p, std::move(data), dom);
}

SpecialValue evaluate(const SolutionDescriptor& sol, double t, double x) {
    if (!(x > 0.0))
        throw DomainError(DomainError::Bound::XMin, "evaluate: x must be positive");
    if (!(t > sol.domain().t_lo))
        throw DomainError(DomainError::Bound::TMin, "evaluate: t below domain");
    if (!(t < sol.domain().t_hi))
        throw DomainError(DomainError::Bound::TMax, "evaluate: t above domain");
    if (sol.flows().empty()) return evaluate_base(sol, t, x);

    // Inverse-flow the point back to the base solution's coordinates.
    PointState q{t, x, 1.0};
    for (auto it = sol.flows().rbegin(); it != sol.flows().rend(); ++it)
        q = flow_point(it->inverse(), PointState{q.t, q.x, 0.0});
    if (!sol.base_domain().contains_t(q.t) || !(q.x > 0.0))
        throw DomainError(DomainError::Bound::Reach,
                          "evaluate: inverse flow leaves the base domain");

    const SpecialValue base = evaluate_base(sol, q.t, q.x);
    PointState fwd{q.t, q.x, 1.0};
    for (const FlowStep& s : sol.flows()) fwd = flow_point(s, fwd);
    const double u = fwd.u * base.value;
    const double err = std::abs(fwd.u) * base.abs_error +
                       2e-15 * std::abs(u) * double(1 + sol.flows().size());
    return SpecialValue{u, err};
}

std::vector<GridRow> evaluate_grid(const SolutionDescriptor& sol, const GridSpec& grid) {
    grid.validate();
    const std::vector<double> ts = grid.t_nodes();
    const std::vector<double> xs = grid.x_nodes();
    std::vector<GridRow> rows(ts.size() * xs.size());

    int threads = 1;
    if (const char* env = std::getenv("POWHEAT_THREADS")) {
        threads = std::max(1, std::atoi(env));
        threads = std::min<int>(threads, std::max(1u, std::thread::hardware_concurrency()));
    }

    std::exception_ptr first_error;
    auto work = [&](size_t begin, size_t end) {
        for (size_t idx = begin; idx < end; ++idx) {
            const size_t it = idx / xs.size();
            const size_t ix = idx % xs.size();
            const SpecialValue v = evaluate(sol, ts[it], xs[ix]);
            rows[idx] = GridRow{ts[it], xs[ix], v.value, v.abs_error};
        }
    };

    if (threads == 1) {
        work(0, rows.size());
    } else {
        std::vector<std::thread> pool;
        std::mutex err_mutex;
        const size_t chunk = (rows.size() + threads - 1) / threads;
        for (int c = 0; c < threads; ++c) {
            const size_t b = std::min(rows.size(), c * chunk);
            const size_t e = std::min(rows.size(), b + chunk);
            if (b >= e) break;
            pool.emplace_back([&, b, e] {
                try {
                    work(b, e);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(err_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        if (first_error) std::rethrow_exception(first_error);
    }
    return rows;
}

Generator invariant_generator(const SolutionDescriptor& sol) {
    if (!sol.flows().empty())
        throw std::invalid_argument("invariant_generator: defined for untransformed solutions");
    const PowerLawParameter p = sol.param();
    return std::visit(
        [&](const auto& d) -> Generator {
            using T = std::decay_t<decltype(d)>;
            Vec4 k = Vec4::Zero();
            if constexpr (std::is_same_v<T, StationaryData>) {
                k(0) = 1.0; // X1
            } else if constexpr (std::is_same_v<T, SeparableData>) {
                k(0) = 1.0;
                k(3) = (d.sign == SeparableSign::Plus ? 1.0 : -1.0) * d.kappa * d.kappa;
            } else if constexpr (std::is_same_v<T, ScaleInvariantData>) {
                k(1) = 1.0;
                k(3) = d.mu;
            } else if constexpr (std::is_same_v<T, ProjectiveData>) {
                k(0) = 1.0;
                k(2) = 1.0;
                k(3) = d.mu;
            } else {
                throw std::invalid_argument(
                    "invariant_generator: superpositions have no single generator");
            }
            return Generator(k, p);
        },
        sol.data());
}

const char* variant_name(const SolutionDescriptor& sol) {
    return std::visit(
        [](const auto& d) -> const char* {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, StationaryData>) return "stationary";
            else if constexpr (std::is_same_v<T, SeparableData>) return "separable";
            else if constexpr (std::is_same_v<T, ScaleInvariantData>) return "scale_invariant";
            else if constexpr (std::is_same_v<T, ProjectiveData>) return "projective";
            else return "superposition";
        },
        sol.data());
}

} // namespace powheat
