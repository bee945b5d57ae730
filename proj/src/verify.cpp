#include "powheat/verify.hpp"

#include <algorithm>
#include <cmath>

namespace powheat {

namespace {

double central_d1(const std::function<double(double)>& f, double c, double h) {
    return (f(c - 2 * h) - 8 * f(c - h) + 8 * f(c + h) - f(c + 2 * h)) / (12 * h);
}

double central_d2(const std::function<double(double)>& f, double c, double h) {
    return (-f(c - 2 * h) + 16 * f(c - h) - 30 * f(c) + 16 * f(c + h) - f(c + 2 * h)) /
           (12 * h * h);
}

// One Richardson step on the 4th-order stencils.
double richardson_d1(const std::function<double(double)>& f, double c, double h) {
    return (16.0 * central_d1(f, c, h / 2) - central_d1(f, c, h)) / 15.0;
}

double richardson_d2(const std::function<double(double)>& f, double c, double h) {
    return (16.0 * central_d2(f, c, h / 2) - central_d2(f, c, h)) / 15.0;
}

/// Step selection: keep the evaluator's noise out of the second
/// difference. rel_noise is abs_error / solution scale.
double auto_step(double rel_noise) {
    const double h = std::sqrt(std::max(rel_noise, 1e-16) / 1e-8);
    return std::clamp(h, kDefaultFdStep, 0.03);
}

double probe_rel_noise(const SolutionDescriptor& sol, const GridSpec& grid) {
    double max_u = 0.0, max_err = 0.0;
    const double tc = 0.5 * (grid.t_min + grid.t_max);
    for (double x : {grid.x_min, 0.5 * (grid.x_min + grid.x_max), grid.x_max}) {
        const SpecialValue v = evaluate(sol, tc, x);
        max_u = std::max(max_u, std::abs(v.value));
        max_err = std::max(max_err, v.abs_error);
    }
    return max_err / std::max(max_u, 1e-300);
}

ResidualReport sweep(const std::function<double(double, double)>& u, double exponent,
                     const GridSpec& grid, double tolerance, double h_rel) {
    grid.validate();
    double max_abs = 0.0;
    double scale = 0.0;
    for (double t : grid.t_nodes()) {
        for (double x : grid.x_nodes()) {
            const PdeTerms p = pde_terms(u, exponent, t, x, h_rel);
            max_abs = std::max(max_abs, std::abs(p.residual));
            scale = std::max({scale, std::abs(p.u_t),
                              std::abs(std::pow(x, exponent) * p.u_xx),
                              std::abs(u(t, x))});
        }
    }
    ResidualReport rep;
    rep.grid = grid;
    rep.max_abs = max_abs;
    rep.rel_norm = max_abs / std::max(scale, 1e-300);
    rep.tolerance = tolerance;
    rep.pass = rep.rel_norm <= tolerance;
    return rep;
}

} // namespace

PdeTerms pde_terms(const std::function<double(double, double)>& u, double exponent,
                   double t, double x, double h_rel) {
    if (!(x > 0.0))
        throw DomainError(DomainError::Bound::XMin, "pde_terms: x must be positive");
    if (!(h_rel > 0.0)) throw std::invalid_argument("pde_terms: step must be positive");
    const double ht = h_rel * std::max(1.0, std::abs(t));
    const double hx = h_rel * std::max(1.0, std::abs(x));
    const double ut = richardson_d1([&](double s) { return u(s, x); }, t, ht);
    const double uxx = richardson_d2([&](double s) { return u(t, s); }, x, hx);
    return PdeTerms{ut, uxx, ut - std::pow(x, exponent) * uxx};
}

double residual(const SolutionDescriptor& sol, double t, double x, double h_rel) {
    auto u = [&sol](double tt, double xx) { return evaluate(sol, tt, xx).value; };
    return pde_terms(u, sol.param().diffusivity_exponent(), t, x, h_rel).residual;
}

double invariant_surface_residual(const SolutionDescriptor& sol, const Generator& X,
                                  double t, double x, double h_rel) {
    if (!(X.param == sol.param()))
        throw ParameterMismatch("invariant_surface_residual: parameter mismatch");
    const InfinitesimalCoefficients c = infinitesimals(X);
    const double ht = h_rel * std::max(1.0, std::abs(t));
    const double hx = h_rel * std::max(1.0, std::abs(x));
    auto u = [&sol](double tt, double xx) { return evaluate(sol, tt, xx).value; };
    const double ut = richardson_d1([&](double s) { return u(s, x); }, t, ht);
    const double ux = richardson_d1([&](double s) { return u(t, s); }, x, hx);
    return c.tau(t) * ut + c.xi(t, x) * ux - c.v(t, x) * u(t, x);
}

ResidualReport residual_report(const SolutionDescriptor& sol, const GridSpec& grid,
                               double tolerance, double h_rel) {
    if (h_rel == 0.0) h_rel = auto_step(probe_rel_noise(sol, grid));
    auto u = [&sol](double tt, double xx) { return evaluate(sol, tt, xx).value; };
    return sweep(u, sol.param().diffusivity_exponent(), grid, tolerance, h_rel);
}

ResidualReport residual_report_fn(const std::function<double(double, double)>& u,
                                  double exponent, const GridSpec& grid, double tolerance,
                                  double h_rel) {
    return sweep(u, exponent, grid, tolerance, h_rel);
}

ResidualReport reflection_residual(const SolutionDescriptor& sol, const GridSpec& grid,
                                   double tolerance) {
    const double a = sol.param().value();
    auto v = [&sol](double t, double y) { return y * evaluate(sol, t, 1.0 / y).value; };
    // Probe the evaluator noise through the reflection map.
    double max_u = 0.0, max_err = 0.0;
    const double tc = 0.5 * (grid.t_min + grid.t_max);
    for (double y : {grid.x_min, 0.5 * (grid.x_min + grid.x_max), grid.x_max}) {
        const SpecialValue val = evaluate(sol, tc, 1.0 / y);
        max_u = std::max(max_u, std::abs(y * val.value));
        max_err = std::max(max_err, y * val.abs_error);
    }
    const double h = auto_step(max_err / std::max(max_u, 1e-300));
    return sweep(v, 2.0 + 1.0 / a, grid, tolerance, h);
}

FdSolution fd_solve(const FdConfig& cfg, PowerLawParameter param, const GridSpec& grid) {
    grid.validate();
    if (!(cfg.theta >= 0.0 && cfg.theta <= 1.0))
        throw std::invalid_argument("fd_solve: theta must lie in [0,1]");

    const int nx = grid.n_x;
    const int nt = grid.n_t;
    const double dt = grid.dt();
    const double dx = grid.dx();
    const std::vector<double> xs = grid.x_nodes();
    const std::vector<double> ts = grid.t_nodes();
    const double exponent = param.diffusivity_exponent();

    Eigen::VectorXd r(nx); // D_i dt / dx^2
    for (int i = 0; i < nx; ++i) r(i) = std::pow(xs[size_t(i)], exponent) * dt / (dx * dx);

    Eigen::MatrixXd U(nt, nx);
    for (int i = 0; i < nx; ++i)
        U(0, i) = evaluate(cfg.boundary_source, ts[0], xs[size_t(i)]).value;

    // Thomas solve of the theta-scheme tridiagonal system per step.
    Eigen::VectorXd cp(nx), dp(nx);
    for (int n = 1; n < nt; ++n) {
        const double t_new = ts[size_t(n)];
        Eigen::VectorXd rhs(nx);
        rhs(0) = evaluate(cfg.boundary_source, t_new, xs[0]).value;
        rhs(nx - 1) = evaluate(cfg.boundary_source, t_new, xs[size_t(nx - 1)]).value;
        for (int i = 1; i < nx - 1; ++i)
            rhs(i) = U(n - 1, i) + (1.0 - cfg.theta) * r(i) *
                                       (U(n - 1, i - 1) - 2.0 * U(n - 1, i) + U(n - 1, i + 1));

        // lower/diag/upper: -theta r_i, 1 + 2 theta r_i, -theta r_i
        cp(0) = 0.0;
        dp(0) = rhs(0); // Dirichlet row: 1 * u_0 = rhs
        for (int i = 1; i < nx - 1; ++i) {
            const double lo = -cfg.theta * r(i);
            const double di = 1.0 + 2.0 * cfg.theta * r(i);
            const double up = -cfg.theta * r(i);
            const double denom = di - lo * cp(i - 1);
            // theta >= 0 and r > 0 keep the system strictly diagonally dominant
            cp(i) = up / denom;
            dp(i) = (rhs(i) - lo * dp(i - 1)) / denom;
        }
        U(n, nx - 1) = rhs(nx - 1);
        for (int i = nx - 2; i >= 1; --i) U(n, i) = dp(i) - cp(i) * U(n, i + 1);
        U(n, 0) = rhs(0);
    }
    return FdSolution{grid, std::move(U)};
}

std::vector<ConvergenceRow> convergence_study(const FdConfig& cfg, PowerLawParameter param,
                                              const GridSpec& base_grid, int refinements) {
    if (refinements < 3)
        throw std::invalid_argument("convergence_study: at least 3 refinements required");
    std::vector<ConvergenceRow> out;
    double prev_error = 0.0;
    for (int level = 0; level < refinements; ++level) {
        const int factor = 1 << level;
        GridSpec g(base_grid.t_min, base_grid.t_max, (base_grid.n_t - 1) * factor + 1,
                   base_grid.x_min, base_grid.x_max, (base_grid.n_x - 1) * factor + 1);
        const FdSolution fd = fd_solve(cfg, param, g);
        const std::vector<double> xs = g.x_nodes();
        double err = 0.0, umax = 0.0;
        for (int i = 0; i < g.n_x; ++i) {
            const double exact =
                evaluate(cfg.boundary_source, g.t_max, xs[size_t(i)]).value;
            err = std::max(err, std::abs(fd.u(g.n_t - 1, i) - exact));
            umax = std::max(umax, std::abs(exact));
        }
        ConvergenceRow row;
        row.n = g.n_x;
        row.error = err;
        row.roundoff = err <= 1e-12 * std::max(umax, 1.0);
        row.observed_order = (level == 0 || row.roundoff || prev_error == 0.0)
                                 ? std::numeric_limits<double>::quiet_NaN()
                                 : std::log2(prev_error / err);
        out.push_back(row);
        prev_error = err;
    }
    return out;
}

} // namespace powheat
