#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "powheat/report.hpp"
#include "powheat/solutions.hpp"

namespace powheat {

/// Default relative step for the residual finite differences.
inline constexpr double kDefaultFdStep = 1e-4;

/// u_t and u_xx by 5-point central differences with one Richardson
/// extrapolation step, for an arbitrary evaluator and diffusivity
/// exponent (the reflection check needs exponents outside 2 - 1/a,
/// a > 0).
struct PdeTerms {
    double u_t;
    double u_xx;
    double residual; // u_t - x^exponent * u_xx
};

PdeTerms pde_terms(const std::function<double(double, double)>& u, double exponent,
                   double t, double x, double h_rel = kDefaultFdStep);

/// Residual u_t - x^(2-1/a) u_xx of the solution at one point.
double residual(const SolutionDescriptor& sol, double t, double x,
                double h_rel = kDefaultFdStep);

/// tau u_t + xi u_x - V u for the generator's infinitesimals.
double invariant_surface_residual(const SolutionDescriptor& sol, const Generator& X,
                                  double t, double x, double h_rel = kDefaultFdStep);

/// Residual sweep over a grid. rel_norm divides the max residual by the
/// largest of |u_t|, |x^(2-1/a) u_xx| and |u| seen on the grid. h_rel = 0
/// selects the step automatically from the evaluator's reported accuracy
/// (integration-backed branches need a larger step than series-backed
/// ones to keep evaluation noise out of the second difference).
ResidualReport residual_report(const SolutionDescriptor& sol, const GridSpec& grid,
                               double tolerance = 1e-6, double h_rel = 0.0);

/// Same sweep for a bare evaluator and explicit diffusivity exponent.
ResidualReport residual_report_fn(const std::function<double(double, double)>& u,
                                  double exponent, const GridSpec& grid,
                                  double tolerance = 1e-6, double h_rel = kDefaultFdStep);

/// Builds v(t,y) = y u(t, 1/y) and checks it against the PDE with the
/// parameter reflected to -a (diffusivity exponent 2 + 1/a). The grid is
/// understood in the reflected variable y.
ResidualReport reflection_residual(const SolutionDescriptor& sol, const GridSpec& grid,
                                   double tolerance = 1e-6);

/// theta-weighted implicit finite-difference scheme (theta = 1/2 is
/// Crank-Nicolson) with Dirichlet data sampled from an exact solution;
/// reference oracle for manufactured-solution testing.
struct FdConfig {
    double theta = 0.5;
    SolutionDescriptor boundary_source;
};

struct FdSolution {
    GridSpec grid;
    Eigen::MatrixXd u; // n_t rows, n_x columns
};

FdSolution fd_solve(const FdConfig& cfg, PowerLawParameter param, const GridSpec& grid);

struct ConvergenceRow {
    int n;                 // spatial node count at this level
    double error;          // max |u_fd - exact| at the final time
    double observed_order; // NaN on the first level or at roundoff
    bool roundoff;         // error at the exact-arithmetic floor
};

std::vector<ConvergenceRow> convergence_study(const FdConfig& cfg, PowerLawParameter param,
                                              const GridSpec& base_grid, int refinements);

} // namespace powheat
