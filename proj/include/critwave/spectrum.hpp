#pragma once

#include <vector>

#include "critwave/grid.hpp"
#include "critwave/potential.hpp"

namespace critwave {

/// Symmetric tridiagonal matrix; diag has size m, off size m-1.
struct Tridiagonal {
    std::vector<double> diag;
    std::vector<double> off;

    int size() const { return static_cast<int>(diag.size()); }
};

/// Discretization of L_phi = -Laplacian - V + 5 phi^4 on radial functions,
/// in the w = r*u representation with Dirichlet ends w(0) = w(r_max) = 0.
/// Rows cover the interior nodes i = 1..n-1.
Tridiagonal assemble_linearized(const Potential& v, const RadialField& phi);

/// Same with phi = 0, i.e. the Schroedinger operator -Laplacian - V.
Tridiagonal assemble_schroedinger(const Potential& v);

/// Number of eigenvalues of T strictly below x (Sturm sequence count).
int sturm_count_below(const Tridiagonal& t, double x);

/// k-th smallest eigenvalue (k = 0-based), bisected to abs_tol.
double kth_eigenvalue(const Tridiagonal& t, int k, double abs_tol = 1e-12);

struct EigenPair {
    double eigenvalue;   // -k^2 < 0
    double k;            // growth/decay rate, k = sqrt(-eigenvalue)
    RadialField rho;     // eigenfunction, L^2(R^3)-normalized
    double residual;     // ||L rho - eigenvalue rho||_{L^2}
};

struct SpectralData {
    int n_neg = 0;
    std::vector<EigenPair> eigs;    // sorted: -k_1^2 <= ... <= -k_n^2 < 0
    double gap = 0.0;               // signed eigenvalue nearest zero
};

/// All negative eigenpairs of the tridiagonal operator: Sturm bisection to
/// 1e-12, inverse iteration for the vectors, conversion back to rho = w/r.
SpectralData negative_eigenpairs(const Tridiagonal& t, const GridPtr& grid);

enum class StabilityKind { Stable, Unstable };

struct Classification {
    StabilityKind kind;
    int n_unstable = 0;
    /// |gap| <= gap_tol: hyperbolicity is numerically marginal and the
    /// stable/unstable verdict should not be trusted.
    bool near_degenerate = false;
};

Classification classify(const Potential& v, const RadialField& phi, double gap_tol = 1e-6);

/// Coefficient a_j^+ of the growing mode (rho_j, k_j rho_j) in the linear
/// splitting around (phi, 0):
///   a_j^+ = (k_j <u - phi, rho_j> + <u_t, rho_j>) / (2 k_j).
double unstable_coefficient(const RadialPair& pair, const RadialField& phi,
                            const SpectralData& spec, int j);

/// Independent oscillation-theorem cross-check: integrates the zero-energy
/// equation -w'' + (-V + 5 phi^4) w = 0 with an adaptive RK scheme and
/// counts sign changes; equals the number of negative eigenvalues.
int oscillation_count(const Potential& v, const RadialField& phi);

}  // namespace critwave
