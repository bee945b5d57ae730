#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace powheat {

/// Adaptive Dormand-Prince 5(4) integration of y' = f(s, y) from s0 to s1.
/// Throws std::runtime_error if the state blows up or the step count limit
/// is exceeded.
template <int N, class F>
Eigen::Matrix<double, N, 1> integrate_ode(F&& f, double s0, double s1,
                                          Eigen::Matrix<double, N, 1> y,
                                          double rtol = 1e-10, double atol = 1e-14,
                                          long max_steps = 2000000) {
    using Vec = Eigen::Matrix<double, N, 1>;
    if (s1 == s0) return y;

    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                            e3 = 500.0 / 1113 - 7571.0 / 16695,
                            e4 = 125.0 / 192 - 393.0 / 640,
                            e5 = -2187.0 / 6784 + 92097.0 / 339200,
                            e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

    const double dir = s1 > s0 ? 1.0 : -1.0;
    double s = s0;
    double h = dir * std::min(std::abs(s1 - s0), 0.1 * (1.0 + std::abs(s0)));
    Vec k1 = f(s, y);

    for (long step = 0; step < max_steps; ++step) {
        if (dir * (s + h - s1) > 0.0) h = s1 - s;

        const Vec k2 = f(s + c2 * h, Vec(y + h * (a21 * k1)));
        const Vec k3 = f(s + c3 * h, Vec(y + h * (a31 * k1 + a32 * k2)));
        const Vec k4 = f(s + c4 * h, Vec(y + h * (a41 * k1 + a42 * k2 + a43 * k3)));
        const Vec k5 = f(s + c5 * h, Vec(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
        const Vec k6 = f(s + h, Vec(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
        const Vec ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Vec k7 = f(s + h, ynew);
        const Vec errv = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double err = 0.0;
        for (int i = 0; i < N; ++i) {
            const double sc = atol + rtol * std::max(std::abs(y(i)), std::abs(ynew(i)));
            err = std::max(err, std::abs(errv(i)) / sc);
        }

        if (err <= 1.0) {
            s += h;
            y = ynew;
            k1 = k7;
            if (!y.allFinite() || y.template lpNorm<Eigen::Infinity>() > 1e100)
                throw std::runtime_error("integrate_ode: state blew up");
            if (s == s1 || dir * (s1 - s) <= 0.0) return y;
        }

        const double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        h *= std::clamp(fac, 0.2, 5.0);
        if (std::abs(h) < 1e-15 * (1.0 + std::abs(s)))
            throw std::runtime_error("integrate_ode: step size underflow");
    }
    throw std::runtime_error("integrate_ode: step limit exceeded");
}

} // namespace powheat
