#pragma once

#include <memory>
#include <span>
#include <vector>

namespace critwave {

/// Uniform radial mesh on [0, r_max] with nodes r_i = i*dr, i = 0..n.
/// Immutable after construction; shared between fields via GridPtr.
class Grid {
public:
    Grid(int n, double r_max);

    int n() const noexcept { return n_; }
    double r_max() const noexcept { return r_max_; }
    double dr() const noexcept { return dr_; }
    int nodes() const noexcept { return n_ + 1; }
    double r(int i) const noexcept { return r_[static_cast<size_t>(i)]; }
    std::span<const double> r() const noexcept { return r_; }

private:
    int n_;
    double r_max_;
    double dr_;
    std::vector<double> r_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(int n, double r_max);

/// Scalar radial field sampled at the grid nodes.
struct RadialField {
    GridPtr grid;
    std::vector<double> u;

    RadialField() = default;
    explicit RadialField(GridPtr g, double fill = 0.0);
    RadialField(GridPtr g, std::vector<double> values);

    double& operator[](int i) { return u[static_cast<size_t>(i)]; }
    double operator[](int i) const { return u[static_cast<size_t>(i)]; }
    int nodes() const { return static_cast<int>(u.size()); }
};

/// Phase-space point (u, u_t); both fields live on one grid.
struct RadialPair {
    RadialField u;
    RadialField ut;
};

bool same_grid(const GridPtr& a, const GridPtr& b);
void require_same_grid(const RadialField& a, const RadialField& b);
void require_valid(const RadialPair& p);
bool is_finite(const RadialField& f);
bool is_finite(const RadialPair& p);

RadialField zeros_like(const RadialField& f);
RadialField scaled(const RadialField& f, double s);
RadialField add_scaled(const RadialField& a, const RadialField& b, double s);
void axpy(RadialField& a, const RadialField& b, double s);
RadialPair pair_add_scaled(const RadialPair& a, const RadialPair& b, double s);

/// Central-difference d/dr; uses evenness of u at the origin and a
/// one-sided second-order stencil at r_max.
RadialField radial_derivative(const RadialField& f);

/// Discrete Laplacian of u computed through w = r*u, so the 1/r
/// coordinate singularity never appears.  At r=0 the regular limit
/// 6*(u1-u0)/dr^2 is used.
RadialField laplacian_w(const RadialField& f);

// Norms and integrals.  Every volume integral carries the 4*pi factor so
// values match the corresponding R^3 integrals of radial functions.
double h1_seminorm_sq(const RadialField& f);
double l2_norm_sq(const RadialField& f);
double l6_norm(const RadialField& f);
double lp_norm(const RadialField& f, int p);
double inner_l2(const RadialField& a, const RadialField& b);

/// 4*pi * integral_{rho_in}^{rho_out} (u_r^2 + u_t^2) r^2 dr.
/// Throws std::domain_error if rho_out exceeds the grid.
double annulus_energy(const RadialPair& p, double rho_in, double rho_out);

/// H^1 x L^2 distance between (u,ut) and the static pair (phi,0),
/// restricted to r <= A.
double local_pair_dist(const RadialPair& p, const RadialField& phi, double A);

double pair_norm_h1l2(const RadialPair& p);
double pair_dist_h1l2(const RadialPair& p, const RadialField& phi);

/// 4*pi * integral of f(r) r^2 dr over [a,b] by trapezoid with linear
/// interpolation at the cut radii (additive over adjacent intervals).
double integral_r2_between(const RadialField& f, double a, double b);

}  // namespace critwave
