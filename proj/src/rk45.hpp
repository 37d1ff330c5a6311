#pragma once

// Dormand-Prince 4(5) adaptive stepper for small ODE systems, used by the
// shooting solvers.  Internal to the library.

#include <algorithm>
#include <array>
#include <cmath>

namespace critwave::detail {

template <int N>
using State = std::array<double, N>;

struct Rk45Options {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double h_init = 1e-4;
    double h_min = 1e-14;
    double h_max = 0.1;
};

enum class Rk45Status { Done, Stopped, StepUnderflow };

// Integrates y' = f(r, y) from r0 to r1.  `watch(r, y)` is called after
// every accepted step and may return false to stop early.
template <int N, typename F, typename Watch>
Rk45Status rk45_integrate(F&& f, double r0, double r1, State<N>& y, const Rk45Options& opt,
                          Watch&& watch) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                            e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                            e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

    double r = r0;
    double h = std::min(opt.h_init, r1 - r0);
    State<N> k1, k2, k3, k4, k5, k6, k7, yt, y5;

    f(r, y, k1);
    while (r < r1) {
        h = std::min(h, r1 - r);
        for (int i = 0; i < N; ++i) yt[i] = y[i] + h * a21 * k1[i];
        f(r + c2 * h, yt, k2);
        for (int i = 0; i < N; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        f(r + c3 * h, yt, k3);
        for (int i = 0; i < N; ++i) yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f(r + c4 * h, yt, k4);
        for (int i = 0; i < N; ++i)
            yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        f(r + c5 * h, yt, k5);
        for (int i = 0; i < N; ++i)
            yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        f(r + h, yt, k6);
        for (int i = 0; i < N; ++i)
            y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        f(r + h, y5, k7);

        double err = 0.0;
        for (int i = 0; i < N; ++i) {
            const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                                  e7 * k7[i]);
            const double sc = opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
            err = std::max(err, std::abs(e) / sc);
        }

        if (err <= 1.0) {
            r += h;
            y = y5;
            k1 = k7;  // FSAL
            if (!watch(r, y)) return Rk45Status::Stopped;
        }
        const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-16), -0.2), 0.2, 5.0);
        h = std::min(h * fac, opt.h_max);
        if (h < opt.h_min) return Rk45Status::StepUnderflow;
    }
    return Rk45Status::Done;
}

}  // namespace critwave::detail
