#include "critwave/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace critwave {

Grid::Grid(int n, double r_max) : n_(n), r_max_(r_max) {
    if (n < 16) throw std::invalid_argument("Grid: point count must be >= 16");
    if (!(r_max > 0.0) || !std::isfinite(r_max))
        throw std::invalid_argument("Grid: r_max must be positive and finite");
    dr_ = r_max / n;
    r_.resize(static_cast<size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) r_[static_cast<size_t>(i)] = i * dr_;
    r_[static_cast<size_t>(n)] = r_max;  // exact outer node
}

GridPtr make_grid(int n, double r_max) { return std::make_shared<const Grid>(n, r_max); }

RadialField::RadialField(GridPtr g, double fill)
    : grid(std::move(g)), u(static_cast<size_t>(grid->nodes()), fill) {}

RadialField::RadialField(GridPtr g, std::vector<double> values)
    : grid(std::move(g)), u(std::move(values)) {
    if (static_cast<int>(u.size()) != grid->nodes())
        throw std::invalid_argument("RadialField: value count must equal n+1");
}

bool same_grid(const GridPtr& a, const GridPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return a->n() == b->n() && a->r_max() == b->r_max();
}

void require_same_grid(const RadialField& a, const RadialField& b) {
    if (!same_grid(a.grid, b.grid))
        throw std::invalid_argument("fields live on different grids");
}

void require_valid(const RadialPair& p) {
    require_same_grid(p.u, p.ut);
    if (!is_finite(p)) throw std::invalid_argument("RadialPair has non-finite entries");
}

bool is_finite(const RadialField& f) {
    return std::all_of(f.u.begin(), f.u.end(), [](double x) { return std::isfinite(x); });
}

bool is_finite(const RadialPair& p) { return is_finite(p.u) && is_finite(p.ut); }

RadialField zeros_like(const RadialField& f) { return RadialField(f.grid); }

RadialField scaled(const RadialField& f, double s) {
    RadialField out = f;
    for (double& x : out.u) x *= s;
    return out;
}

RadialField add_scaled(const RadialField& a, const RadialField& b, double s) {
    require_same_grid(a, b);
    RadialField out = a;
    for (int i = 0; i < out.nodes(); ++i) out[i] += s * b[i];
    return out;
}

void axpy(RadialField& a, const RadialField& b, double s) {
    require_same_grid(a, b);
    for (int i = 0; i < a.nodes(); ++i) a[i] += s * b[i];
}

RadialPair pair_add_scaled(const RadialPair& a, const RadialPair& b, double s) {
    return {add_scaled(a.u, b.u, s), add_scaled(a.ut, b.ut, s)};
}

RadialField radial_derivative(const RadialField& f) {
    const Grid& g = *f.grid;
    const int n = g.n();
    const double dr = g.dr();
    RadialField d(f.grid);
    d[0] = 0.0;  // u even in r
    for (int i = 1; i < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * dr);
    d[n] = (3.0 * f[n] - 4.0 * f[n - 1] + f[n - 2]) / (2.0 * dr);
    return d;
}

RadialField laplacian_w(const RadialField& f) {
    if (!is_finite(f)) throw std::invalid_argument("laplacian_w: field has non-finite entries");
    const Grid& g = *f.grid;
    const int n = g.n();
    const double dr = g.dr();
    const double inv_dr2 = 1.0 / (dr * dr);

    std::vector<double> w(static_cast<size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) w[static_cast<size_t>(i)] = g.r(i) * f[i];

    RadialField out(f.grid);
    out[0] = 6.0 * (f[1] - f[0]) * inv_dr2;
    for (int i = 1; i < n; ++i) {
        const double w2 = w[static_cast<size_t>(i) + 1] - 2.0 * w[static_cast<size_t>(i)] +
                          w[static_cast<size_t>(i) - 1];
        out[i] = w2 * inv_dr2 / g.r(i);
    }
    // one-sided second-order second difference at the outer node
    const double w2n = 2.0 * w[static_cast<size_t>(n)] - 5.0 * w[static_cast<size_t>(n) - 1] +
                       4.0 * w[static_cast<size_t>(n) - 2] - w[static_cast<size_t>(n) - 3];
    out[n] = w2n * inv_dr2 / g.r(n);
    return out;
}

namespace {

constexpr double kFourPi = 4.0 * 3.14159265358979323846;

// trapezoid of f(r) r^2 dr over the whole grid
template <typename F>
double trapz_r2(const Grid& g, F&& node_value) {
    const int n = g.n();
    double acc = 0.5 * node_value(0) * g.r(0) * g.r(0);
    for (int i = 1; i < n; ++i) acc += node_value(i) * g.r(i) * g.r(i);
    acc += 0.5 * node_value(n) * g.r(n) * g.r(n);
    return acc * g.dr();
}

}  // namespace

double h1_seminorm_sq(const RadialField& f) {
    RadialField d = radial_derivative(f);
    return kFourPi * trapz_r2(*f.grid, [&](int i) { return d[i] * d[i]; });
}

double l2_norm_sq(const RadialField& f) {
    return kFourPi * trapz_r2(*f.grid, [&](int i) { return f[i] * f[i]; });
}

double l6_norm(const RadialField& f) {
    const double v = kFourPi * trapz_r2(*f.grid, [&](int i) {
        const double x = f[i];
        const double x3 = x * x * x;
        return x3 * x3;
    });
    return std::pow(v, 1.0 / 6.0);
}

double lp_norm(const RadialField& f, int p) {
    if (p < 1) throw std::invalid_argument("lp_norm: p must be >= 1");
    const double v = kFourPi * trapz_r2(*f.grid, [&](int i) {
        return std::pow(std::abs(f[i]), static_cast<double>(p));
    });
    return std::pow(v, 1.0 / p);
}

double inner_l2(const RadialField& a, const RadialField& b) {
    require_same_grid(a, b);
    return kFourPi * trapz_r2(*a.grid, [&](int i) { return a[i] * b[i]; });
}

double integral_r2_between(const RadialField& f, double a, double b) {
    const Grid& g = *f.grid;
    if (!(a <= b)) throw std::invalid_argument("integral_r2_between: need a <= b");
    if (a < 0.0 || b > g.r_max() * (1.0 + 1e-12))
        throw std::domain_error("integral_r2_between: interval exceeds the grid");
    b = std::min(b, g.r_max());

    const double dr = g.dr();
    // cumulative trapezoid of h(r) = f(r) r^2 up to radius rho, with linear
    // interpolation of h inside the cut cell; difference of cumulatives keeps
    // the integral additive over adjacent intervals
    auto h = [&](int i) { return f[i] * g.r(i) * g.r(i); };
    auto cumulative = [&](double rho) {
        const int k = std::min(static_cast<int>(rho / dr), g.n() - 1);
        double acc = 0.0;
        for (int i = 0; i < k; ++i) acc += 0.5 * (h(i) + h(i + 1)) * dr;
        const double s = rho - g.r(k);
        if (s > 0.0) {
            const double t = s / dr;
            const double h_cut = (1.0 - t) * h(k) + t * h(k + 1);
            acc += 0.5 * (h(k) + h_cut) * s;
        }
        return acc;
    };
    return kFourPi * (cumulative(b) - cumulative(a));
}

double annulus_energy(const RadialPair& p, double rho_in, double rho_out) {
    require_valid(p);
    if (!(rho_in >= 0.0) || !(rho_in < rho_out))
        throw std::invalid_argument("annulus_energy: need 0 <= rho_in < rho_out");
    if (rho_out > p.u.grid->r_max() * (1.0 + 1e-12))
        throw std::domain_error("annulus_energy: rho_out exceeds r_max; enlarge the grid");
    RadialField du = radial_derivative(p.u);
    RadialField dens(p.u.grid);
    for (int i = 0; i < dens.nodes(); ++i) dens[i] = du[i] * du[i] + p.ut[i] * p.ut[i];
    return integral_r2_between(dens, rho_in, rho_out);
}

double local_pair_dist(const RadialPair& p, const RadialField& phi, double A) {
    require_same_grid(p.u, phi);
    RadialField diff = add_scaled(p.u, phi, -1.0);
    RadialField dd = radial_derivative(diff);
    RadialField dens(p.u.grid);
    for (int i = 0; i < dens.nodes(); ++i) dens[i] = dd[i] * dd[i] + p.ut[i] * p.ut[i];
    const double a = std::min(A, p.u.grid->r_max());
    return std::sqrt(integral_r2_between(dens, 0.0, a));
}

double pair_norm_h1l2(const RadialPair& p) {
    return std::sqrt(h1_seminorm_sq(p.u) + l2_norm_sq(p.ut));
}

double pair_dist_h1l2(const RadialPair& p, const RadialField& phi) {
    RadialField diff = add_scaled(p.u, phi, -1.0);
    return std::sqrt(h1_seminorm_sq(diff) + l2_norm_sq(p.ut));
}

}  // namespace critwave
