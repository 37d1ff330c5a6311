#pragma once

// Shared test oracles.  Everything here is independent of the library's
// quadrature/eigen/evolution code paths: adaptive Simpson quadrature, the
// d'Alembert solution for free radial waves in the w representation, and a
// discrete-dispersion eigenvalue oracle for the square well.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "critwave/grid.hpp"

namespace testsupport {

inline constexpr double kFourPi = 4.0 * 3.14159265358979323846;

// --- adaptive Simpson ---------------------------------------------------

inline double simpson(const std::function<double(double)>& f, double a, double m, double b,
                      double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                                   double fa, double fm, double fb, double whole, double tol,
                                   int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(f, a, lm, m, fa, flm, fm);
    const double right = simpson(f, m, rm, b, fm, frm, fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

// panel-wise adaptive Simpson; the uniform pre-split keeps localized
// integrands from fooling the top-level error estimate
inline double adaptive_quad(const std::function<double(double)>& f, double a, double b,
                            double tol = 1e-12, int panels = 64) {
    double acc = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double pa = a + (b - a) * p / panels;
        const double pb = a + (b - a) * (p + 1) / panels;
        const double m = 0.5 * (pa + pb);
        const double fa = f(pa), fm = f(m), fb = f(pb);
        acc += adaptive_simpson_rec(f, pa, pb, fa, fm, fb, simpson(f, pa, m, pb, fa, fm, fb),
                                    tol / panels, 40);
    }
    return acc;
}

// 4*pi * int f(r) r^2 dr over [a, b]
inline double volume_quad(const std::function<double(double)>& f, double a, double b,
                          double tol = 1e-12) {
    return kFourPi * adaptive_quad([&](double r) { return f(r) * r * r; }, a, b, tol);
}

// --- d'Alembert oracle for the free radial wave -------------------------
//
// w solves w_tt = w_rr on r > 0 with w(t,0) = 0; the solution is the odd
// extension formula.  Data is supplied as callables u0(r), u1(r).

struct DAlembert {
    std::function<double(double)> u0, u1;

    double w0(double s) const {  // odd extension of r*u0(r)
        const double r = std::abs(s);
        return (s >= 0 ? 1.0 : -1.0) * r * u0(r);
    }
    double w1(double s) const {
        const double r = std::abs(s);
        return (s >= 0 ? 1.0 : -1.0) * r * u1(r);
    }

    double w(double t, double r, double tol = 1e-12) const {
        const double travel = 0.5 * (w0(r + t) + w0(r - t));
        if (r - t == r + t) return travel;
        return travel + 0.5 * adaptive_quad([&](double s) { return w1(s); }, r - t, r + t, tol);
    }
    double wt(double t, double r, double h = 1e-5) const {
        return (w(t + h, r) - w(t - h, r)) / (2.0 * h);
    }
    double wr(double t, double r, double h = 1e-5) const {
        return (w(t, r + h) - w(t, r - h)) / (2.0 * h);
    }

    // 4*pi * int_{a}^{b} (u_r^2 + u_t^2) r^2 dr at time t, via u = w/r
    double exterior_energy(double t, double a, double b, double tol = 1e-9) const {
        auto dens = [&](double r) {
            const double ur = wr(t, r) / r - w(t, r) / (r * r);
            const double ut = wt(t, r) / r;
            return (ur * ur + ut * ut) * r * r;
        };
        return kFourPi * adaptive_quad(dens, std::max(a, 1e-6), b, tol);
    }
};

// --- discrete square-well eigenvalue oracle ------------------------------
//
// Dirichlet discretization of -w'' - V w on nodes 1..n-1 with V = c for
// r < 1, c/2 at r = 1 and 0 outside (interface exactly on node m).  The
// eigenvector is sin(q j dr) inside and sinh(kappa (n-j) dr) outside; the
// matching condition at node m gives a scalar transcendental equation.

inline double square_well_discrete_eig(int n, double dr, int m, double c, double lam_lo,
                                       double lam_hi) {
    auto mismatch = [&](double lam) {
        const double cosq = 1.0 - (lam + c) * dr * dr / 2.0;
        if (!(cosq > -1.0 && cosq < 1.0))
            throw std::invalid_argument("square-well oracle: q out of range");
        const double q = std::acos(cosq) / dr;
        const double coshk = 1.0 - lam * dr * dr / 2.0;
        if (!(coshk >= 1.0)) throw std::invalid_argument("square-well oracle: lambda >= 0");
        const double kappa = std::acosh(coshk) / dr;
        const double s_in = std::sin(q * (m - 1) * dr) / std::sin(q * m * dr);
        const double s_out =
            std::sinh(kappa * (n - m - 1) * dr) / std::sinh(kappa * (n - m) * dr);
        return 2.0 / (dr * dr) - c / 2.0 - lam - (s_in + s_out) / (dr * dr);
    };
    double lo = lam_lo, hi = lam_hi;
    double flo = mismatch(lo), fhi = mismatch(hi);
    if (flo * fhi > 0.0)
        throw std::invalid_argument("square-well oracle: no sign change in bracket");
    for (int it = 0; it < 200 && hi - lo > 1e-14 * std::abs(lo); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = mismatch(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// continuum s-wave bound state of the unit-radius square well of depth c:
// root of sqrt(c - k^2) cot(sqrt(c - k^2)) = -k
inline double square_well_continuum_k(double c) {
    auto f = [&](double k) {
        const double q = std::sqrt(c - k * k);
        return q * std::cos(q) / std::sin(q) + k;
    };
    double lo = 1e-9, hi = std::sqrt(c) - 1e-9;
    // narrow to the ground branch: q in (pi/2, pi) where cot < 0
    hi = std::min(hi, std::sqrt(c - 1e-12));
    double flo = f(lo), fhi = f(hi);
    (void)fhi;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// smooth compactly supported bump, peak `amp` at r = c, support (c-w, c+w)
inline critwave::RadialField bump_field(const critwave::GridPtr& g, double amp, double c,
                                        double w) {
    critwave::RadialField f(g);
    for (int i = 0; i < f.nodes(); ++i) {
        const double s = (g->r(i) - c) / w;
        if (std::abs(s) < 1.0) f[i] = amp * std::exp(1.0 - 1.0 / (1.0 - s * s));
    }
    return f;
}

inline double bump_value(double r, double amp, double c, double w) {
    const double s = (r - c) / w;
    return std::abs(s) < 1.0 ? amp * std::exp(1.0 - 1.0 / (1.0 - s * s)) : 0.0;
}

}  // namespace testsupport
