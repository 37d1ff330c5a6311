#pragma once

#include <optional>
#include <string>
#include <vector>

#include "critwave/grid.hpp"
#include "critwave/potential.hpp"

namespace critwave {

enum class ShootOutcome { DecaysPositive, DecaysNegative, BlowsUp, Indeterminate };

struct ShootResult {
    RadialField trajectory;     // phi = w/r sampled at the nodes (0 past blow-up)
    ShootOutcome outcome = ShootOutcome::Indeterminate;
    int sign_changes = 0;
    int final_sign = 0;         // sign of w at exit or at r_max
    double r_exit = 0.0;        // radius where the cap was hit; r_max otherwise
    std::string diagnostic;
};

struct ShootOptions {
    double blowup_cap = 1e6;
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
};

/// Integrates the steady-state ODE w'' = -V w + w^5 / r^4 with w(0) = 0,
/// w'(0) = a = phi(0), adaptively, and classifies the endpoint.
ShootResult shoot(const Potential& v, double a, const ShootOptions& opt = {});

struct SteadyState {
    RadialField phi;
    int sign_changes = 0;
    double energy_J = 0.0;
    double residual = 0.0;     // max norm of the discrete w-ODE
    double decay_const = 0.0;  // sup (1+r)|phi|
    double shoot_param = 0.0;  // a = phi(0)
    bool under_resolved = false;
};

struct SteadyOptions {
    double tol_steady = 1e-8;
    double bisect_tol_a = 1e-12;
    double dedup_l6 = 1e-6;
    int newton_max_iter = 50;
    int jobs = 1;
    ShootOptions shoot;
    std::vector<std::string>* diagnostics = nullptr;  // optional log sink
};

/// J(phi) = integral of |grad phi|^2/2 - V phi^2/2 + phi^6/6 over R^3.
double energy_J(const RadialField& phi, const Potential& v);

/// Max norm of the discrete steady-state equation in the w representation.
double steady_residual(const RadialField& phi, const Potential& v);

/// Newton refinement of a profile on the grid (tridiagonal Jacobian
/// -d^2/dr^2 - V + 5 phi^4, Dirichlet at 0, Neumann at r_max).
std::optional<SteadyState> newton_refine(const RadialField& phi0, const Potential& v,
                                         const SteadyOptions& opt = {});

/// Scan-and-bisect catalog of radial steady states, Newton-refined,
/// deduplicated in L^6 and sorted by energy.  Always contains the zero state.
std::vector<SteadyState> find_steady_states(const Potential& v, double a_min, double a_max,
                                            int n_scan, const SteadyOptions& opt = {});

/// Constructive fixed point for the large stable excited state
/// phi = W - W_lambda + eta over V = 2W^4 + 2W_lambda^4: eta solves
/// eta = L_lambda^{-1} f_lambda - L_lambda^{-1} N(eta, lambda) by iteration
/// with tridiagonal solves.  Throws numerical_error when the map fails to
/// contract (lambda too small).
struct ExcitedConstruction {
    SteadyState state;
    double eta_l6 = 0.0;    // size of the correction
    int iterations = 0;
};
ExcitedConstruction construct_stable_excited(const GridPtr& grid, double lambda,
                                             double eps_target = 0.5);

struct DecayCheckResult {
    double decay_const = 0.0;  // sup over the outer half-grid of (1+r)|phi|
    bool pass = false;
};

/// Appendix-style decay audit: (1+r)|phi| must be non-increasing (within
/// 5%) over the last decade of r.
DecayCheckResult decay_check(const SteadyState& state);

}  // namespace critwave
