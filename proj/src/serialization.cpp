#include "powheat/serialization.hpp"

#include <cmath>
#include <cstdio>

namespace powheat {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json to_json(const Generator& g) {
    return json{{"a", g.param.value()},
                {"k", {g.k(0), g.k(1), g.k(2), g.k(3)}}};
}

Generator generator_from_json(const json& j) {
    const PowerLawParameter p(j.at("a").get<double>());
    const auto& arr = j.at("k");
    if (!arr.is_array() || arr.size() != 4)
        throw std::invalid_argument("generator JSON: \"k\" must be a 4-array");
    Vec4 k;
    for (int i = 0; i < 4; ++i) k(i) = arr.at(size_t(i)).get<double>();
    return Generator(k, p);
}

json to_json(const AdjointMap& m) {
    json steps = json::array();
    for (const AdjointStep& s : m.steps)
        steps.push_back(json{{"i", s.basis_index}, {"eps", s.eps}});
    return json{{"steps", std::move(steps)}, {"rescale", m.rescale}};
}

AdjointMap adjoint_map_from_json(const json& j) {
    AdjointMap m;
    for (const auto& s : j.at("steps"))
        m.steps.push_back(AdjointStep{s.at("i").get<int>(), s.at("eps").get<double>()});
    m.rescale = j.at("rescale").get<double>();
    if (m.rescale == 0.0 || !std::isfinite(m.rescale))
        throw std::invalid_argument("adjoint map JSON: rescale must be finite and nonzero");
    return m;
}

json to_json(const Classification& c) {
    json j{{"class", to_string(c.cls.tag)}, {"adjoint_map", to_json(c.map)}};
    if (c.cls.mu) j["mu"] = *c.cls.mu;
    return j;
}

namespace {

json domain_to_json(const Domain& d) {
    json j;
    j["t_min"] = std::isinf(d.t_lo) ? json(nullptr) : json(d.t_lo);
    j["t_max"] = std::isinf(d.t_hi) ? json(nullptr) : json(d.t_hi);
    return j;
}

json params_to_json(const SolutionDescriptor& sol) {
    return std::visit(
        [](const auto& d) -> json {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, StationaryData>) {
                return json{{"c1", d.c1}, {"c2", d.c2}};
            } else if constexpr (std::is_same_v<T, SeparableData>) {
                return json{{"sign", d.sign == SeparableSign::Plus ? "+" : "-"},
                            {"kappa", d.kappa},
                            {"c_reg", d.c_reg},
                            {"c_irr", d.c_irr}};
            } else if constexpr (std::is_same_v<T, ScaleInvariantData>) {
                return json{{"mu", d.mu}, {"c_reg", d.c_reg}, {"c_irr", d.c_irr}};
            } else if constexpr (std::is_same_v<T, ProjectiveData>) {
                return json{{"mu", d.mu}, {"c_reg", d.c_reg}, {"c_irr", d.c_irr}};
            } else {
                json parts = json::array();
                for (const WeightedPart& p : d.parts)
                    parts.push_back(
                        json{{"weight", p.weight}, {"descriptor", to_json(*p.part)}});
                return json{{"parts", std::move(parts)}};
            }
        },
        sol.data());
}

} // namespace

json to_json(const SolutionDescriptor& sol) {
    json flows = json::array();
    for (const FlowStep& f : sol.flows()) {
        const Vec4& k = f.generator.k;
        flows.push_back(json{{"k", {k(0), k(1), k(2), k(3)}}, {"eps", f.eps}});
    }
    return json{{"a", sol.param().value()},
                {"variant", variant_name(sol)},
                {"params", params_to_json(sol)},
                {"flows", std::move(flows)},
                {"domain", domain_to_json(sol.domain())}};
}

SolutionDescriptor solution_from_json(const json& j) {
    const PowerLawParameter p(j.at("a").get<double>());
    const std::string variant = j.at("variant").get<std::string>();
    const json& params = j.at("params");

    SolutionDescriptor base = [&]() -> SolutionDescriptor {
        if (variant == "stationary")
            return make_stationary(p, params.at("c1").get<double>(),
                                   params.at("c2").get<double>());
        if (variant == "separable") {
            const std::string s = params.at("sign").get<std::string>();
            if (s != "+" && s != "-")
                throw std::invalid_argument("descriptor JSON: sign must be \"+\" or \"-\"");
            return make_separable(p, s == "+" ? SeparableSign::Plus : SeparableSign::Minus,
                                  params.at("kappa").get<double>(),
                                  params.at("c_reg").get<double>(),
                                  params.at("c_irr").get<double>());
        }
        if (variant == "scale_invariant")
            return make_scale_invariant(p, params.at("mu").get<double>(),
                                        params.at("c_reg").get<double>(),
                                        params.at("c_irr").get<double>());
        if (variant == "projective")
            return make_projective(p, params.at("mu").get<double>(),
                                   params.at("c_reg").get<double>(),
                                   params.at("c_irr").get<double>());
        if (variant == "superposition") {
            std::vector<std::pair<double, SolutionDescriptor>> parts;
            for (const auto& q : params.at("parts"))
                parts.emplace_back(q.at("weight").get<double>(),
                                   solution_from_json(q.at("descriptor")));
            return superpose(parts);
        }
        throw std::invalid_argument("descriptor JSON: unknown variant \"" + variant + "\"");
    }();

    if (auto it = j.find("flows"); it != j.end()) {
        for (const auto& f : *it) {
            const auto& arr = f.at("k");
            if (!arr.is_array() || arr.size() != 4)
                throw std::invalid_argument("descriptor JSON: flow \"k\" must be a 4-array");
            Vec4 k;
            for (int i = 0; i < 4; ++i) k(i) = arr.at(size_t(i)).get<double>();
            base = base.with_flow(FlowStep(Generator(k, p), f.at("eps").get<double>()));
        }
    }
    return base;
}

json to_json(const ResidualReport& rep) {
    return json{{"grid",
                 {{"t_min", rep.grid.t_min},
                  {"t_max", rep.grid.t_max},
                  {"n_t", rep.grid.n_t},
                  {"x_min", rep.grid.x_min},
                  {"x_max", rep.grid.x_max},
                  {"n_x", rep.grid.n_x}}},
                {"max_abs", rep.max_abs},
                {"rel_norm", rep.rel_norm},
                {"tolerance", rep.tolerance},
                {"pass", rep.pass}};
}

std::string to_csv(const std::vector<GridRow>& rows) {
    std::string out = "t,x,u,abs_error\n";
    for (const GridRow& r : rows) {
        out += format_g17(r.t);
        out += ',';
        out += format_g17(r.x);
        out += ',';
        out += format_g17(r.u);
        out += ',';
        out += format_g17(r.abs_error);
        out += '\n';
    }
    return out;
}

} // namespace powheat
