#pragma once

#include <optional>
#include <vector>

#include "critwave/diagnostics.hpp"
#include "critwave/evolve.hpp"
#include "critwave/spectrum.hpp"
#include "critwave/steady.hpp"

namespace critwave {

/// Finite-dimensional slice of data space: base + sum_k s_k * directions[k].
struct DataFamily {
    RadialPair base;
    std::vector<RadialPair> directions;

    RadialPair at(std::span<const double> s) const;
    RadialPair at(double s) const;  // one-parameter convenience

    /// Gram determinant of the directions in H^1 x L^2; must exceed 1e-12.
    double gram_det() const;
    void validate() const;
};

struct ThresholdOptions {
    double eps_scatter = 1e-2;
    double tau = 20.0;
    /// Ambiguous probes re-run with t_end doubled up to this factor.
    int max_extend = 8;
    /// Shadowing tolerance for residence-time measurement (defaults to
    /// eps_scatter when 0).
    double eps_residence = 0.0;
    /// Index into the catalog of the unstable state whose stable set the
    /// bisection is straddling (for residence measurement).
    int phi_u_index = 0;
    int max_probes = 200;
};

struct ThresholdResult {
    double s_lo = 0.0, s_hi = 0.0;
    std::optional<int> winner_lo, winner_hi;  // catalog indices
    double width = 0.0;
    double residence_time = 0.0;  // shadowing time of the last midpoint probe
    /// (bracket width, residence time) pairs collected while bisecting.
    std::vector<std::pair<double, double>> residence_samples;
    int probes = 0;
    bool flagged_ambiguous = false;
};

/// Bisects a 1-parameter family between two data points whose solutions
/// resolve to different steady states.  Throws std::invalid_argument when
/// the endpoint labels coincide ("no dichotomy in range").
ThresholdResult bisect_threshold(const DataFamily& family, const Potential& v,
                                 const EvolveConfig& cfg, const std::vector<SteadyState>& catalog,
                                 double s_lo, double s_hi, double tol_s,
                                 const ThresholdOptions& opt = {});

/// Trajectory leaving (phi_u, 0) along the growing mode:
/// data = (phi_u, 0) + s_small (rho_1, k_1 rho_1).
EvolutionTrace unstable_manifold_trajectory(const SteadyState& phi_u, const SpectralData& spec,
                                            double s_small, const Potential& v,
                                            const EvolveConfig& cfg,
                                            const std::vector<SteadyState>& catalog,
                                            int phi_u_index);

struct ExtraRadiationResult {
    double e_ext_on = 0.0;
    double e_ext_off = 0.0;
    std::optional<double> delta_obs;  // empty when a run failed to resolve
    std::optional<int> winner_on, winner_off;
    bool resolved_on = false, resolved_off = false;
};

/// Late-time exterior energy (in energy units, i.e. with the 1/2 factors)
/// outside r = t - L for an on-manifold proxy and an off-manifold
/// neighbour; delta_obs = E_ext_off - (E(U) - J(phi_u)).
ExtraRadiationResult extra_radiation_experiment(const RadialPair& on_data,
                                                const RadialPair& off_data,
                                                const SteadyState& phi_u, const Potential& v,
                                                const EvolveConfig& cfg,
                                                const std::vector<SteadyState>& catalog,
                                                double L, double eps_scatter = 1e-2,
                                                double tau = 20.0);

/// Alternating coordinate bisection zeroing the two growing-mode
/// coefficients (a_1^+, a_2^+) of a 2-parameter family, extracted at the
/// fixed early time t_meas.  Returns (s_1*, s_2*).
std::pair<double, double> zero_unstable_pair(const DataFamily& family, const Potential& v,
                                             const RadialField& phi_u, const SpectralData& spec,
                                             double t_meas, double s1_lo, double s1_hi,
                                             double s2_lo, double s2_hi, double tol,
                                             const EvolveConfig& cfg);

}  // namespace critwave
