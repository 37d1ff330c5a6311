#include "critwave/manifold.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "critwave/errors.hpp"

namespace critwave {

RadialPair DataFamily::at(std::span<const double> s) const {
    if (s.size() != directions.size())
        throw std::invalid_argument("DataFamily: parameter count mismatch");
    RadialPair p = base;
    for (size_t k = 0; k < directions.size(); ++k) p = pair_add_scaled(p, directions[k], s[k]);
    return p;
}

RadialPair DataFamily::at(double s) const { return at(std::span<const double>(&s, 1)); }

double DataFamily::gram_det() const {
    const size_t d = directions.size();
    auto ip = [](const RadialPair& a, const RadialPair& b) {
        RadialField da = radial_derivative(a.u), db = radial_derivative(b.u);
        return inner_l2(da, db) + inner_l2(a.ut, b.ut);
    };
    std::vector<std::vector<double>> gram(d, std::vector<double>(d));
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j <= i; ++j) gram[i][j] = gram[j][i] = ip(directions[i], directions[j]);
    // Gaussian elimination determinant (d is tiny)
    double det = 1.0;
    for (size_t k = 0; k < d; ++k) {
        size_t piv = k;
        for (size_t i = k + 1; i < d; ++i)
            if (std::abs(gram[i][k]) > std::abs(gram[piv][k])) piv = i;
        if (piv != k) {
            std::swap(gram[piv], gram[k]);
            det = -det;
        }
        if (gram[k][k] == 0.0) return 0.0;
        det *= gram[k][k];
        for (size_t i = k + 1; i < d; ++i) {
            const double f = gram[i][k] / gram[k][k];
            for (size_t j = k; j < d; ++j) gram[i][j] -= f * gram[k][j];
        }
    }
    return det;
}

void DataFamily::validate() const {
    if (directions.empty()) throw std::invalid_argument("DataFamily: no directions");
    require_same_grid(base.u, base.ut);
    for (const auto& dir : directions) {
        require_same_grid(dir.u, base.u);
        require_same_grid(dir.ut, base.u);
    }
    if (!(gram_det() > 1e-12))
        throw std::invalid_argument("DataFamily: directions are not linearly independent");
}

namespace {

struct ProbeOutcome {
    std::optional<int> winner;
    bool flagged = false;       // winner assigned by nearest-distance fallback
    double residence = 0.0;     // shadowing time of phi_u
    double exit_dist_mid = 0.0;
};

// residence: duration of the first interval on which d_{phi_u} < eps
double residence_of(const EvolutionTrace& tr, int phi_u_index, double eps) {
    if (phi_u_index < 0 || phi_u_index >= static_cast<int>(tr.local_dists.size())) return 0.0;
    const auto& d = tr.local_dists[static_cast<size_t>(phi_u_index)];
    double entry = -1.0, exit = -1.0;
    for (size_t k = 0; k < d.size(); ++k) {
        if (entry < 0.0 && d[k] < eps) entry = tr.times[k];
        if (entry >= 0.0 && d[k] >= eps) {
            exit = tr.times[k];
            break;
        }
    }
    if (entry < 0.0) return 0.0;
    if (exit < 0.0) exit = tr.times.back();
    return exit - entry;
}

ProbeOutcome probe(const RadialPair& data, const Potential& v, const EvolveConfig& base_cfg,
                   const std::vector<SteadyState>& catalog, const ThresholdOptions& opt) {
    const double eps_res = (opt.eps_residence > 0.0) ? opt.eps_residence : opt.eps_scatter;
    EvolveConfig cfg = base_cfg;
    ProbeOutcome out;
    for (int extend = 1; extend <= opt.max_extend; extend *= 2) {
        cfg.t_end = base_cfg.t_end * extend;
        const EvolutionTrace tr = evolve(data, v, cfg, catalog);
        const ResolutionReport rep = detect_resolution(tr, opt.eps_scatter, opt.tau);
        out.residence = residence_of(tr, opt.phi_u_index, eps_res);
        if (rep.winner) {
            out.winner = rep.winner;
            return out;
        }
        if (extend * 2 > opt.max_extend) {
            // count the probe toward the nearest label, flagged
            int best = -1;
            double best_d = std::numeric_limits<double>::infinity();
            for (size_t j = 0; j < tr.local_dists.size(); ++j) {
                const double d = tr.local_dists[j].back();
                if (d < best_d) {
                    best_d = d;
                    best = static_cast<int>(j);
                }
            }
            out.winner = best >= 0 ? std::optional<int>(best) : std::nullopt;
            out.flagged = true;
            return out;
        }
    }
    return out;
}

}  // namespace

ThresholdResult bisect_threshold(const DataFamily& family, const Potential& v,
                                 const EvolveConfig& cfg, const std::vector<SteadyState>& catalog,
                                 double s_lo, double s_hi, double tol_s,
                                 const ThresholdOptions& opt) {
    family.validate();
    if (family.directions.size() != 1)
        throw std::invalid_argument("bisect_threshold: family must be one-parameter");
    if (!(s_lo < s_hi)) throw std::invalid_argument("bisect_threshold: need s_lo < s_hi");
    if (catalog.empty()) throw std::invalid_argument("bisect_threshold: empty catalog");

    ThresholdResult res;
    ProbeOutcome lo = probe(family.at(s_lo), v, cfg, catalog, opt);
    ProbeOutcome hi = probe(family.at(s_hi), v, cfg, catalog, opt);
    res.probes = 2;
    res.flagged_ambiguous = lo.flagged || hi.flagged;
    if (!lo.winner || !hi.winner || *lo.winner == *hi.winner)
        throw std::invalid_argument("bisect_threshold: no dichotomy in range");

    while (s_hi - s_lo > tol_s && res.probes < opt.max_probes) {
        const double mid = 0.5 * (s_lo + s_hi);
        if (mid == s_lo || mid == s_hi) break;
        ProbeOutcome pm = probe(family.at(mid), v, cfg, catalog, opt);
        ++res.probes;
        res.flagged_ambiguous = res.flagged_ambiguous || pm.flagged;
        res.residence_time = pm.residence;
        res.residence_samples.emplace_back(s_hi - s_lo, pm.residence);
        if (*pm.winner == *lo.winner) {
            s_lo = mid;
            lo = pm;
        } else {
            s_hi = mid;
            hi = pm;
        }
    }

    res.s_lo = s_lo;
    res.s_hi = s_hi;
    res.width = s_hi - s_lo;
    res.winner_lo = lo.winner;
    res.winner_hi = hi.winner;
    return res;
}

EvolutionTrace unstable_manifold_trajectory(const SteadyState& phi_u, const SpectralData& spec,
                                            double s_small, const Potential& v,
                                            const EvolveConfig& cfg,
                                            const std::vector<SteadyState>& catalog,
                                            int phi_u_index) {
    if (spec.n_neg < 1)
        throw std::invalid_argument("unstable_manifold_trajectory: state has no unstable mode");
    const EigenPair& e = spec.eigs.front();
    RadialPair data{phi_u.phi, RadialField(phi_u.phi.grid)};
    data = pair_add_scaled(data, RadialPair{e.rho, scaled(e.rho, e.k)}, s_small);
    return evolve(data, v, cfg, catalog, &spec, phi_u_index);
}

ExtraRadiationResult extra_radiation_experiment(const RadialPair& on_data,
                                                const RadialPair& off_data,
                                                const SteadyState& phi_u, const Potential& v,
                                                const EvolveConfig& cfg,
                                                const std::vector<SteadyState>& catalog,
                                                double L, double eps_scatter, double tau) {
    auto run = [&](const RadialPair& data, double& e_ext, std::optional<int>& winner,
                   bool& resolved) {
        const EvolutionTrace tr = evolve(data, v, cfg, catalog);
        const ResolutionReport rep = detect_resolution(tr, eps_scatter, tau);
        winner = rep.winner;
        resolved = rep.winner.has_value();
        const double t_end = tr.times.back();
        const double rho_in = std::max(0.0, t_end - L);
        const double r_max = v.grid()->r_max();
        // energy-unit exterior integral (1/2 factors)
        e_ext = rho_in >= r_max ? 0.0 : 0.5 * annulus_energy(tr.final_state, rho_in, r_max);
    };

    ExtraRadiationResult out;
    run(on_data, out.e_ext_on, out.winner_on, out.resolved_on);
    run(off_data, out.e_ext_off, out.winner_off, out.resolved_off);
    if (out.resolved_on && out.resolved_off) {
        const double e_u = energy(on_data, v);
        out.delta_obs = out.e_ext_off - (e_u - phi_u.energy_J);
    }
    return out;
}

std::pair<double, double> zero_unstable_pair(const DataFamily& family, const Potential& v,
                                             const RadialField& phi_u, const SpectralData& spec,
                                             double t_meas, double s1_lo, double s1_hi,
                                             double s2_lo, double s2_hi, double tol,
                                             const EvolveConfig& cfg) {
    family.validate();
    if (family.directions.size() != 2)
        throw std::invalid_argument("zero_unstable_pair: family must be two-parameter");
    if (spec.n_neg < 2)
        throw std::invalid_argument("zero_unstable_pair: need two unstable modes");

    EvolveConfig c = cfg;
    c.t_end = t_meas;
    auto coeff = [&](double s1, double s2, int j) {
        const std::array<double, 2> s{s1, s2};
        const EvolutionTrace tr = evolve(family.at(s), v, c);
        return unstable_coefficient(tr.final_state, phi_u, spec, j);
    };

    double s1 = 0.5 * (s1_lo + s1_hi), s2 = 0.5 * (s2_lo + s2_hi);
    for (int round = 0; round < 40; ++round) {
        // bisect s1 on a_1^+ with s2 frozen
        double lo = s1_lo, hi = s1_hi;
        double flo = coeff(lo, s2, 0), fhi = coeff(hi, s2, 0);
        if (flo * fhi > 0.0) throw numerical_error("zero_unstable_pair: a_1^+ does not change sign");
        while (hi - lo > tol) {
            const double mid = 0.5 * (lo + hi);
            const double fm = coeff(mid, s2, 0);
            if ((fm < 0.0) == (flo < 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        s1 = 0.5 * (lo + hi);
        // bisect s2 on a_2^+ with s1 frozen
        lo = s2_lo;
        hi = s2_hi;
        flo = coeff(s1, lo, 1);
        fhi = coeff(s1, hi, 1);
        if (flo * fhi > 0.0) throw numerical_error("zero_unstable_pair: a_2^+ does not change sign");
        while (hi - lo > tol) {
            const double mid = 0.5 * (lo + hi);
            const double fm = coeff(s1, mid, 1);
            if ((fm < 0.0) == (flo < 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        const double s2_new = 0.5 * (lo + hi);
        const bool settled = std::abs(s2_new - s2) <= 2.0 * tol;
        s2 = s2_new;
        if (settled && std::abs(coeff(s1, s2, 0)) < 10.0 * tol) break;
    }
    return {s1, s2};
}

}  // namespace critwave
