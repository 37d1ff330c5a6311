#pragma once

#include <limits>
#include <vector>

#include "critwave/grid.hpp"
#include "critwave/potential.hpp"
#include "critwave/spectrum.hpp"
#include "critwave/steady.hpp"

namespace critwave {

enum class Boundary {
    Outgoing,         // Sommerfeld w_t = -w_r at r_max, first-order upwind
    ReflectingGuard,  // energy-conserving wall; measurements are exact until
                      // the wave first touches it (first_contact_time)
};

struct EvolveConfig {
    double dt = 0.0;    // 0 means cfl * dr
    double t_end = 0.0;
    double cfl = 0.9;
    Boundary boundary = Boundary::ReflectingGuard;
    int snapshot_stride = 0;            // steps between stored snapshots (0: none)
    double sample_dt = 1.0;             // measurement cadence in time units
    double local_radius = 10.0;         // A in the local H^1 x L^2 distances
    std::vector<double> ext_offsets;    // cone offsets R for exterior energies
    bool nonlinear = true;              // false: drop u^5 (linear test mode)
    double drift_tol = 1e-6;
};

struct EvolutionTrace {
    GridPtr grid;
    std::vector<double> times;
    std::vector<double> energy;
    std::vector<double> local_energy;                // energy density over r <= A
    std::vector<std::vector<double>> exterior_energy;  // [offset][sample], outside r = R + t
    std::vector<std::vector<double>> local_dists;      // [ref][sample]
    std::vector<std::vector<double>> mode_coeffs;      // [mode][sample], <u - phi, rho_i>
    std::vector<std::vector<double>> l6_diffs;         // [ref][sample], ||u - phi_j||_L6
    std::vector<double> strichartz_surrogate;  // running integral of ||u-phi_p||_L10^5
    double first_contact_time = std::numeric_limits<double>::infinity();
    bool drift_exceeded = false;
    std::vector<double> snapshot_times;
    std::vector<RadialPair> snapshots;
    RadialPair final_state;

    int samples() const { return static_cast<int>(times.size()); }
};

/// One leapfrog (kick-drift-kick) step of the w-equation
/// w_tt = w_rr + V w - w^5 / r^4 with w(0) = 0.
RadialPair step(const RadialPair& state, const Potential& v, double dt,
                Boundary boundary = Boundary::ReflectingGuard, bool nonlinear = true);

/// E(u, u_t) = integral of u_r^2/2 + u_t^2/2 - V u^2/2 + u^6/6 over R^3.
double energy(const RadialPair& state, const Potential& v);

/// Time integration with measurement sampling.  `references` are the steady
/// states used for local distances; `spec` (optional) supplies the
/// eigenfunctions of L_phi for the primary reference `primary_ref`, whose
/// mode coefficients are traced.
EvolutionTrace evolve(const RadialPair& data, const Potential& v, const EvolveConfig& cfg,
                      const std::vector<SteadyState>& references = {},
                      const SpectralData* spec = nullptr, int primary_ref = 0);

}  // namespace critwave
