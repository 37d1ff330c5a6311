#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "critwave/evolve.hpp"
#include "critwave/grid.hpp"
#include "critwave/potential.hpp"
#include "critwave/steady.hpp"

namespace critwave {

enum class ChannelDirection { Forward, Backward };

/// Infimum over sampled times of the energy outside the expanding region
/// r >= R + |t|.
struct ChannelReport {
    double R = 0.0;
    ChannelDirection direction = ChannelDirection::Forward;
    double min_ext_energy = 0.0;
    std::vector<double> times_sampled;
    std::vector<double> ext_energies;
};

struct ChannelOptions {
    double sample_dt = 1.0;
    /// Sampling is refined by this factor around the observed minimum.
    int refine_factor = 4;
    double cfl = 0.9;
};

/// Evolves the data forward and (via u_t -> -u_t) backward and records the
/// exterior energies outside r = R + |t|.  Requires r_max >= R + t_end.
std::pair<ChannelReport, ChannelReport> channel_scan(const RadialPair& data, const Potential& v,
                                                     double R, double t_end,
                                                     const ChannelOptions& opt = {});

/// The R = 0 channel constant: max over time directions of the infimum of
/// the exterior energy outside r = |t|.
double quantitative_channel(const RadialPair& data, const Potential& v, double t_end,
                            const ChannelOptions& opt = {});

/// delta of the quantitative channel statement: H^1 x L^2 distance from the
/// data to the closest catalogued steady state.
double distance_to_catalog(const RadialPair& data, const std::vector<SteadyState>& catalog);

struct ResolutionReport {
    std::optional<int> winner;    // index into the reference catalog
    double trailing_dist = 0.0;   // max local distance over the window
    double radiated_energy = 0.0; // E(0) - E_local(T)
    double window_start = 0.0;
    double window_end = 0.0;
};

/// Soliton-resolution detector: the winner is the unique reference whose
/// local distance stays below eps_scatter over the trailing window of
/// length tau.  None when no or several references qualify.
ResolutionReport detect_resolution(const EvolutionTrace& trace, double eps_scatter, double tau);

/// True when the L^6 distance to the given reference has fallen below eps
/// by the end of the trace.
bool l6_decay(const EvolutionTrace& trace, int ref_index, double eps);

}  // namespace critwave
