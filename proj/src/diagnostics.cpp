#include "critwave/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace critwave {

namespace {

ChannelReport report_from_trace(const EvolutionTrace& tr, double R, ChannelDirection dir) {
    ChannelReport rep;
    rep.R = R;
    rep.direction = dir;
    rep.times_sampled = tr.times;
    rep.ext_energies = tr.exterior_energy.at(0);
    rep.min_ext_energy = *std::min_element(rep.ext_energies.begin(), rep.ext_energies.end());
    return rep;
}

}  // namespace

std::pair<ChannelReport, ChannelReport> channel_scan(const RadialPair& data, const Potential& v,
                                                     double R, double t_end,
                                                     const ChannelOptions& opt) {
    require_valid(data);
    require_same_grid(data.u, v.values);
    if (!(R >= 0.0)) throw std::invalid_argument("channel_scan: need R >= 0");
    const double r_max = data.u.grid->r_max();
    if (R + t_end > r_max * (1.0 + 1e-12))
        throw std::domain_error("channel_scan: domain too small, need r_max >= R + t_end");

    EvolveConfig cfg;
    cfg.t_end = t_end;
    cfg.cfl = opt.cfl;
    cfg.boundary = Boundary::ReflectingGuard;
    // exterior energies vary on O(1) times; sample everywhere at the refined
    // cadence so the reported infimum is the refined one
    cfg.sample_dt = opt.sample_dt / std::max(1, opt.refine_factor);
    cfg.ext_offsets = {R};

    const EvolutionTrace fwd = evolve(data, v, cfg);
    const RadialPair reversed{data.u, scaled(data.ut, -1.0)};
    const EvolutionTrace bwd = evolve(reversed, v, cfg);

    return {report_from_trace(fwd, R, ChannelDirection::Forward),
            report_from_trace(bwd, R, ChannelDirection::Backward)};
}

double quantitative_channel(const RadialPair& data, const Potential& v, double t_end,
                            const ChannelOptions& opt) {
    const auto [fwd, bwd] = channel_scan(data, v, 0.0, t_end, opt);
    return std::max(fwd.min_ext_energy, bwd.min_ext_energy);
}

double distance_to_catalog(const RadialPair& data, const std::vector<SteadyState>& catalog) {
    if (catalog.empty()) throw std::invalid_argument("distance_to_catalog: empty catalog");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : catalog) best = std::min(best, pair_dist_h1l2(data, s.phi));
    return best;
}

ResolutionReport detect_resolution(const EvolutionTrace& trace, double eps_scatter, double tau) {
    ResolutionReport rep;
    if (trace.times.empty()) return rep;
    const double t_end = trace.times.back();
    rep.window_start = t_end - tau;
    rep.window_end = t_end;

    int first_idx = 0;
    while (first_idx < trace.samples() && trace.times[static_cast<size_t>(first_idx)] < rep.window_start)
        ++first_idx;
    if (first_idx >= trace.samples()) first_idx = trace.samples() - 1;

    std::optional<int> winner;
    bool ambiguous = false;
    double trailing = 0.0;
    for (size_t j = 0; j < trace.local_dists.size(); ++j) {
        double worst = 0.0;
        bool ok = true;
        for (int k = first_idx; k < trace.samples(); ++k) {
            const double d = trace.local_dists[j][static_cast<size_t>(k)];
            worst = std::max(worst, d);
            if (!(d < eps_scatter)) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        if (winner) {
            ambiguous = true;
            break;
        }
        winner = static_cast<int>(j);
        trailing = worst;
    }
    if (!ambiguous && winner) {
        rep.winner = winner;
        rep.trailing_dist = trailing;
        rep.radiated_energy = trace.energy.front() - trace.local_energy.back();
    }
    return rep;
}

bool l6_decay(const EvolutionTrace& trace, int ref_index, double eps) {
    if (ref_index < 0 || ref_index >= static_cast<int>(trace.l6_diffs.size()))
        throw std::invalid_argument("l6_decay: reference index out of range");
    if (trace.l6_diffs[static_cast<size_t>(ref_index)].empty()) return false;
    return trace.l6_diffs[static_cast<size_t>(ref_index)].back() < eps;
}

}  // namespace critwave
