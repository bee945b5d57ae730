// powheat: classification, construction, transformation and verification
// of group-invariant solutions of u_t = x^(2-1/a) u_xx.
//
// Exit codes: 0 success, 1 verification failure, 2 usage/input error.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "powheat/serialization.hpp"
#include "powheat/solutions.hpp"
#include "powheat/transforms.hpp"
#include "powheat/verify.hpp"

namespace {

using namespace powheat;

void write_output(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << content;
}

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Vec4 parse_k(const std::string& s) {
    Vec4 k;
    std::istringstream ss(s);
    std::string tok;
    int i = 0;
    while (std::getline(ss, tok, ',')) {
        if (i >= 4) throw std::invalid_argument("--k expects exactly 4 comma-separated values");
        k(i++) = std::stod(tok);
    }
    if (i != 4) throw std::invalid_argument("--k expects exactly 4 comma-separated values");
    return k;
}

struct FlowFlag {
    int i;
    double eps;
};

FlowFlag parse_flow(const std::string& s) {
    const auto pos = s.find(':');
    if (pos == std::string::npos)
        throw std::invalid_argument("--flow expects i:eps (e.g. 3:0.25)");
    FlowFlag f;
    f.i = std::stoi(s.substr(0, pos));
    f.eps = std::stod(s.substr(pos + 1));
    if (f.i < 1 || f.i > 4) throw std::invalid_argument("--flow basis index must be in 1..4");
    return f;
}

struct GridFlags {
    double t_min = 0.0, t_max = 0.0, x_min = 0.0, x_max = 0.0;
    int n_t = 0, n_x = 0;

    void attach(CLI::App* cmd, bool required) {
        auto* a = cmd->add_option("--t-min", t_min, "lower time bound");
        auto* b = cmd->add_option("--t-max", t_max, "upper time bound");
        auto* c = cmd->add_option("--nt", n_t, "time node count (>= 2)");
        auto* d = cmd->add_option("--x-min", x_min, "lower space bound (> 0)");
        auto* e = cmd->add_option("--x-max", x_max, "upper space bound");
        auto* f = cmd->add_option("--nx", n_x, "space node count (>= 2)");
        if (required)
            for (auto* o : {a, b, c, d, e, f}) o->required();
    }

    GridSpec spec() const { return GridSpec{t_min, t_max, n_t, x_min, x_max, n_x}; }
};

struct DescriptorFlags {
    std::string path;
    double a = 0.0;
    std::string variant;
    double c1 = 0.0, c2 = 0.0;
    std::string sign = "+";
    double kappa = 0.0, mu = 0.0;
    double c_reg = 1.0, c_irr = 0.0;
    std::vector<std::string> flow_specs;
    bool inline_used = false;

    void attach(CLI::App* cmd) {
        auto* file = cmd->add_option("--descriptor,-d", path,
                                     "solution descriptor JSON file ('-' for stdin)");
        auto* av = cmd->add_option("--a", a, "power-law parameter a (inline descriptor)");
        cmd->add_option("--variant", variant,
                        "stationary|separable|scale_invariant|projective");
        cmd->add_option("--c1", c1, "stationary: linear coefficient");
        cmd->add_option("--c2", c2, "stationary: constant coefficient");
        cmd->add_option("--sign", sign, "separable: '+' (growing) or '-' (decaying)");
        cmd->add_option("--kappa", kappa, "separable: separation constant kappa");
        cmd->add_option("--mu", mu, "scale_invariant/projective: exponent mu");
        cmd->add_option("--c-reg", c_reg, "weight of the regular basis branch");
        cmd->add_option("--c-irr", c_irr, "weight of the irregular basis branch");
        cmd->add_option("--flow", flow_specs, "group flow step i:eps, repeatable, applied left to right");
        av->excludes(file);
        cmd->callback([this, av] { inline_used = av->count() > 0; });
    }

    SolutionDescriptor load() const {
        if (!path.empty()) {
            SolutionDescriptor sol = solution_from_json(json::parse(read_input(path)));
            return with_flows(sol);
        }
        if (!inline_used || variant.empty())
            throw std::invalid_argument(
                "provide either --descriptor or inline --a/--variant flags");
        json params;
        if (variant == "stationary") {
            params = {{"c1", c1}, {"c2", c2}};
        } else if (variant == "separable") {
            params = {{"sign", sign}, {"kappa", kappa}, {"c_reg", c_reg}, {"c_irr", c_irr}};
        } else if (variant == "scale_invariant" || variant == "projective") {
            params = {{"mu", mu}, {"c_reg", c_reg}, {"c_irr", c_irr}};
        } else {
            throw std::invalid_argument("unknown --variant: " + variant);
        }
        SolutionDescriptor sol =
            solution_from_json(json{{"a", a}, {"variant", variant}, {"params", params}});
        return with_flows(sol);
    }

private:
    SolutionDescriptor with_flows(SolutionDescriptor sol) const {
        for (const std::string& s : flow_specs) {
            const FlowFlag f = parse_flow(s);
            sol = pushforward(sol,
                              FlowStep(Generator::basis(f.i, sol.param()), f.eps));
        }
        return sol;
    }
};

int cmd_classify(double a, const std::string& k_csv, const std::string& out) {
    const Generator X(parse_k(k_csv), PowerLawParameter(a));
    const Classification c = classify(X);
    const AdjointInvariants inv = invariants(X);
    json j = to_json(c);
    j["phi1"] = inv.phi1;
    j["phi2"] = inv.phi2;
    write_output(out, j.dump(2) + "\n");
    return 0;
}

int cmd_solve(const DescriptorFlags& desc, const GridFlags& grid, bool check, double tol,
              const std::string& out) {
    const SolutionDescriptor sol = desc.load();
    const GridSpec g = grid.spec();
    write_output(out, to_csv(evaluate_grid(sol, g)));
    if (check) {
        const ResidualReport rep = residual_report(sol, g, tol);
        if (!rep.pass) {
            std::cerr << "check failed: rel_norm " << format_g17(rep.rel_norm)
                      << " exceeds tolerance " << format_g17(rep.tolerance) << "\n";
            return 1;
        }
    }
    return 0;
}

int cmd_transform(const DescriptorFlags& desc, const std::string& out) {
    const SolutionDescriptor sol = desc.load(); // flows applied, domains recomputed
    if (sol.domain().empty())
        throw DomainError(DomainError::Bound::Reach,
                          "transformed domain is empty over the declared interval");
    write_output(out, to_json(sol).dump(2) + "\n");
    return 0;
}

int cmd_verify(const DescriptorFlags& desc, const GridFlags& grid, double tol, double h_rel,
               bool stamp, const std::string& out) {
    const SolutionDescriptor sol = desc.load();
    const ResidualReport rep = residual_report(sol, grid.spec(), tol, h_rel);
    json j = to_json(rep);
    if (stamp) {
        const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char buf[32];
        std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&now));
        j["stamp"] = buf;
    }
    write_output(out, j.dump(2) + "\n");
    return rep.pass ? 0 : 1;
}

int cmd_convergence(const DescriptorFlags& desc, const GridFlags& grid, double theta,
                    int refinements, const std::string& out) {
    const SolutionDescriptor sol = desc.load();
    const FdConfig cfg{theta, sol};
    const std::vector<ConvergenceRow> rows =
        convergence_study(cfg, sol.param(), grid.spec(), refinements);
    std::string csv = "n,error,observed_order\n";
    for (const ConvergenceRow& r : rows) {
        csv += std::to_string(r.n);
        csv += ',';
        csv += format_g17(r.error);
        csv += ',';
        if (r.roundoff)
            csv += "roundoff";
        else if (std::isnan(r.observed_order))
            csv += "n/a";
        else
            csv += format_g17(r.observed_order);
        csv += '\n';
    }
    write_output(out, csv);
    return 0;
}

int cmd_sf_eval(const std::string& family, double nu, double alpha, double beta, double l,
                double eta, double x, const std::string& out) {
    SpecialValue v{};
    if (family == "bessel_j") {
        v = bessel(BesselKind::J, nu, x);
    } else if (family == "bessel_y") {
        v = bessel(BesselKind::Y, nu, x);
    } else if (family == "bessel_i") {
        v = bessel(BesselKind::I, nu, x);
    } else if (family == "bessel_k") {
        v = bessel(BesselKind::K, nu, x);
    } else if (family == "kummer_m") {
        v = kummer_m(alpha, beta, x);
    } else if (family == "kummer_irr") {
        const OdeValue w = irregular_pair(OdeBasisSpec::kummer(alpha, beta), x);
        v = SpecialValue{w.value, w.abs_error};
    } else if (family == "coulomb_reg") {
        v = coulomb_regular(l, eta, x);
    } else if (family == "coulomb_irr") {
        const OdeValue w = irregular_pair(OdeBasisSpec::coulomb(l, eta), x);
        v = SpecialValue{w.value, w.abs_error};
    } else {
        throw std::invalid_argument("unknown family: " + family);
    }
    write_output(out, format_g17(v.value) + "," + format_g17(v.abs_error) + "\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact group-invariant solutions of u_t = x^(2-1/a) u_xx"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::simple);
    app.fallthrough(); // lets the global -o appear after the subcommand

    std::string out = "-";
    app.add_option("-o,--output", out, "output path ('-' for stdout)")->capture_default_str();

    // classify
    auto* classify_cmd = app.add_subcommand("classify", "map a generator to its optimal-system representative");
    double cls_a = 0.0;
    std::string cls_k;
    classify_cmd->add_option("--a", cls_a, "power-law parameter a")->required();
    classify_cmd->add_option("--k", cls_k, "coefficients k1,k2,k3,k4")->required();

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "evaluate a solution on a grid, CSV output");
    DescriptorFlags solve_desc;
    solve_desc.attach(solve_cmd);
    GridFlags solve_grid;
    solve_grid.attach(solve_cmd, /*required=*/true);
    bool check = false;
    double solve_tol = 1e-6;
    solve_cmd->add_flag("--check", check, "verify the residual on the same grid");
    solve_cmd->add_option("--tol", solve_tol, "relative residual tolerance for --check")
        ->check(CLI::PositiveNumber);

    // transform
    auto* transform_cmd = app.add_subcommand("transform", "apply group flows to a descriptor, JSON output");
    DescriptorFlags transform_desc;
    transform_desc.attach(transform_cmd);

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "residual report for a descriptor, JSON output");
    DescriptorFlags verify_desc;
    verify_desc.attach(verify_cmd);
    GridFlags verify_grid;
    verify_grid.attach(verify_cmd, /*required=*/true);
    double verify_tol = 1e-6;
    double h_rel = 0.0;
    bool stamp = false;
    verify_cmd->add_option("--tol", verify_tol, "relative residual tolerance")
        ->check(CLI::PositiveNumber);
    verify_cmd->add_option("--h-rel", h_rel,
                           "finite-difference step (0 = automatic from evaluator accuracy)");
    verify_cmd->add_flag("--stamp", stamp, "add a timestamp field to the report");

    // convergence
    auto* conv_cmd = app.add_subcommand("convergence", "finite-difference convergence study, CSV output");
    DescriptorFlags conv_desc;
    conv_desc.attach(conv_cmd);
    GridFlags conv_grid;
    conv_grid.attach(conv_cmd, /*required=*/true);
    double theta = 0.5;
    int refinements = 4;
    conv_cmd->add_option("--theta", theta, "implicitness weight (0.5 = Crank-Nicolson, 1 = backward Euler)")
        ->capture_default_str();
    conv_cmd->add_option("--refinements", refinements, "number of dyadic refinement levels")
        ->capture_default_str();

    // sf (hidden debugging aid)
    auto* sf_cmd = app.add_subcommand("sf", "special-function point evaluation");
    sf_cmd->group(""); // hidden
    auto* sf_eval = sf_cmd->add_subcommand("eval", "evaluate one basis function");
    std::string family;
    double nu = 0.0, alpha = 0.0, beta = 0.0, sf_l = 0.0, sf_eta = 0.0, sf_x = 0.0;
    sf_eval->add_option("--family", family,
                        "bessel_j|bessel_y|bessel_i|bessel_k|kummer_m|kummer_irr|coulomb_reg|coulomb_irr")
        ->required();
    sf_eval->add_option("--nu", nu, "Bessel order");
    sf_eval->add_option("--alpha", alpha, "Kummer alpha");
    sf_eval->add_option("--beta", beta, "Kummer beta");
    sf_eval->add_option("--l", sf_l, "Coulomb l");
    sf_eval->add_option("--eta", sf_eta, "Coulomb eta");
    sf_eval->add_option("--x", sf_x, "evaluation point")->required();
    sf_cmd->require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*classify_cmd) return cmd_classify(cls_a, cls_k, out);
        if (*solve_cmd) return cmd_solve(solve_desc, solve_grid, check, solve_tol, out);
        if (*transform_cmd) return cmd_transform(transform_desc, out);
        if (*verify_cmd)
            return cmd_verify(verify_desc, verify_grid, verify_tol, h_rel, stamp, out);
        if (*conv_cmd) return cmd_convergence(conv_desc, conv_grid, theta, refinements, out);
        if (*sf_eval) return cmd_sf_eval(family, nu, alpha, beta, sf_l, sf_eta, sf_x, out);
        std::cerr << "no subcommand selected\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
