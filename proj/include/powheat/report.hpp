#pragma once

#include <stdexcept>
#include <vector>

namespace powheat {

/// Uniform space-time grid. x_min must be positive (the diffusivity
/// x^(2-1/a) degenerates at x = 0).
struct GridSpec {
    double t_min = 0.0;
    double t_max = 1.0;
    int n_t = 2;
    double x_min = 1.0;
    double x_max = 2.0;
    int n_x = 2;

    GridSpec() = default;
    GridSpec(double tmin, double tmax, int nt, double xmin, double xmax, int nx)
        : t_min(tmin), t_max(tmax), n_t(nt), x_min(xmin), x_max(xmax), n_x(nx) {
        validate();
    }

    void validate() const {
        if (n_t < 2 || n_x < 2)
            throw std::invalid_argument("GridSpec: n_t and n_x must be >= 2");
        if (!(t_min < t_max) || !(x_min < x_max))
            throw std::invalid_argument("GridSpec: bounds must be ordered");
        if (!(x_min > 0.0))
            throw std::invalid_argument("GridSpec: x_min must be positive");
    }

    std::vector<double> t_nodes() const {
        std::vector<double> v(static_cast<size_t>(n_t));
        double dt = (t_max - t_min) / (n_t - 1);
        for (int i = 0; i < n_t; ++i) v[static_cast<size_t>(i)] = t_min + i * dt;
        return v;
    }

    std::vector<double> x_nodes() const {
        std::vector<double> v(static_cast<size_t>(n_x));
        double dx = (x_max - x_min) / (n_x - 1);
        for (int i = 0; i < n_x; ++i) v[static_cast<size_t>(i)] = x_min + i * dx;
        return v;
    }

    double dt() const { return (t_max - t_min) / (n_t - 1); }
    double dx() const { return (x_max - x_min) / (n_x - 1); }
};

/// Outcome of a residual sweep over a grid. rel_norm is the maximum
/// absolute residual divided by the largest competing term on the grid.
struct ResidualReport {
    GridSpec grid;
    double max_abs = 0.0;
    double rel_norm = 0.0;
    double tolerance = 1e-6;
    bool pass = false;
};

} // namespace powheat
