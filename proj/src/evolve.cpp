#include "critwave/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "critwave/errors.hpp"

namespace critwave {

namespace {

class Leapfrog {
public:
    Leapfrog(const Potential& v, double dt, Boundary boundary, bool nonlinear)
        : v_(v), g_(*v.grid()), dt_(dt), boundary_(boundary), nonlinear_(nonlinear) {
        if (!(dt > 0.0)) throw std::invalid_argument("evolve: dt must be positive");
        if (dt > g_.dr() * (1.0 + 1e-12))
            throw std::invalid_argument("evolve: CFL violated (dt must be <= dr)");
        const int n = g_.n();
        inv_dr2_ = 1.0 / (g_.dr() * g_.dr());
        r4_.resize(static_cast<size_t>(n) + 1);
        for (int i = 0; i <= n; ++i) {
            const double r2 = g_.r(i) * g_.r(i);
            r4_[static_cast<size_t>(i)] = r2 * r2;
        }
        force_.resize(static_cast<size_t>(n) + 1);
    }

    void set_state(const RadialPair& p) {
        const int n = g_.n();
        w_.resize(static_cast<size_t>(n) + 1);
        wt_.resize(static_cast<size_t>(n) + 1);
        for (int i = 0; i <= n; ++i) {
            w_[static_cast<size_t>(i)] = g_.r(i) * p.u[i];
            wt_[static_cast<size_t>(i)] = g_.r(i) * p.ut[i];
        }
        w_[0] = 0.0;
        wt_[0] = 0.0;
        compute_force();
    }

    void advance() {
        const int n = g_.n();
        const double half = 0.5 * dt_;
        const int last = (boundary_ == Boundary::Outgoing) ? n - 1 : n;

        double w_n_next = 0.0;
        if (boundary_ == Boundary::Outgoing) {
            // first-order upwind update of w_t = -w_r at the outer node
            w_n_next = w_[static_cast<size_t>(n)] -
                       dt_ / g_.dr() * (w_[static_cast<size_t>(n)] - w_[static_cast<size_t>(n) - 1]);
        }

        for (int i = 1; i <= last; ++i)
            wt_[static_cast<size_t>(i)] += half * force_[static_cast<size_t>(i)];
        for (int i = 1; i <= last; ++i)
            w_[static_cast<size_t>(i)] += dt_ * wt_[static_cast<size_t>(i)];
        if (boundary_ == Boundary::Outgoing) {
            wt_[static_cast<size_t>(n)] = (w_n_next - w_[static_cast<size_t>(n)]) / dt_;
            w_[static_cast<size_t>(n)] = w_n_next;
        }
        compute_force();
        for (int i = 1; i <= last; ++i)
            wt_[static_cast<size_t>(i)] += half * force_[static_cast<size_t>(i)];
    }

    bool finite() const {
        for (double x : w_)
            if (!std::isfinite(x)) return false;
        return true;
    }

    RadialPair state() const {
        const int n = g_.n();
        RadialPair p{RadialField(v_.grid()), RadialField(v_.grid())};
        for (int i = 1; i <= n; ++i) {
            p.u[i] = w_[static_cast<size_t>(i)] / g_.r(i);
            p.ut[i] = wt_[static_cast<size_t>(i)] / g_.r(i);
        }
        const double dr = g_.dr();
        p.u[0] = (4.0 * w_[1] - w_[2]) / (2.0 * dr);
        p.ut[0] = (4.0 * wt_[1] - wt_[2]) / (2.0 * dr);
        return p;
    }

    double w_at(int i) const { return w_[static_cast<size_t>(i)]; }
    double wt_at(int i) const { return wt_[static_cast<size_t>(i)]; }

private:
    void compute_force() {
        const int n = g_.n();
        force_[0] = 0.0;
        for (int i = 1; i < n; ++i) {
            const double wi = w_[static_cast<size_t>(i)];
            double f = (w_[static_cast<size_t>(i) + 1] - 2.0 * wi + w_[static_cast<size_t>(i) - 1]) * inv_dr2_ +
                       v_[i] * wi;
            if (nonlinear_) {
                const double w2 = wi * wi;
                f -= w2 * w2 * wi / r4_[static_cast<size_t>(i)];
            }
            force_[static_cast<size_t>(i)] = f;
        }
        if (boundary_ == Boundary::ReflectingGuard) {
            // Neumann ghost w_{n+1} = w_{n-1}; keeps discrete steady states
            // stationary and conserves the discrete energy
            const double wn = w_[static_cast<size_t>(n)];
            double f = 2.0 * (w_[static_cast<size_t>(n) - 1] - wn) * inv_dr2_ + v_[n] * wn;
            if (nonlinear_) {
                const double w2 = wn * wn;
                f -= w2 * w2 * wn / r4_[static_cast<size_t>(n)];
            }
            force_[static_cast<size_t>(n)] = f;
        } else {
            force_[static_cast<size_t>(n)] = 0.0;
        }
    }

    const Potential& v_;
    const Grid& g_;
    double dt_;
    Boundary boundary_;
    bool nonlinear_;
    double inv_dr2_ = 0.0;
    std::vector<double> r4_;
    std::vector<double> w_, wt_, force_;
};

}  // namespace

RadialPair step(const RadialPair& state, const Potential& v, double dt, Boundary boundary,
                bool nonlinear) {
    require_valid(state);
    require_same_grid(state.u, v.values);
    Leapfrog lf(v, dt, boundary, nonlinear);
    lf.set_state(state);
    lf.advance();
    return lf.state();
}

double energy(const RadialPair& state, const Potential& v) {
    require_same_grid(state.u, v.values);
    RadialField du = radial_derivative(state.u);
    RadialField dens(state.u.grid);
    for (int i = 0; i < dens.nodes(); ++i) {
        const double u = state.u[i];
        const double u2 = u * u;
        const double u6 = u2 * u2 * u2;
        dens[i] = 0.5 * du[i] * du[i] + 0.5 * state.ut[i] * state.ut[i] - 0.5 * v[i] * u2 +
                  u6 / 6.0;
    }
    return integral_r2_between(dens, 0.0, state.u.grid->r_max());
}

EvolutionTrace evolve(const RadialPair& data, const Potential& v, const EvolveConfig& cfg,
                      const std::vector<SteadyState>& references, const SpectralData* spec,
                      int primary_ref) {
    require_valid(data);
    require_same_grid(data.u, v.values);
    if (!references.empty() &&
        (primary_ref < 0 || primary_ref >= static_cast<int>(references.size())))
        throw std::invalid_argument("evolve: primary_ref out of range");
    const Grid& g = *v.grid();
    const double dt = (cfg.dt > 0.0) ? cfg.dt : cfg.cfl * g.dr();
    if (!(cfg.t_end > 0.0)) throw std::invalid_argument("evolve: t_end must be positive");

    const long n_steps = static_cast<long>(std::ceil(cfg.t_end / dt - 1e-9));
    const long stride = std::max<long>(1, std::lround(cfg.sample_dt / dt));

    Leapfrog lf(v, dt, cfg.boundary, cfg.nonlinear);
    lf.set_state(data);

    EvolutionTrace tr;
    tr.grid = v.grid();
    const size_t n_refs = references.size();
    const size_t n_modes = spec ? references.empty() ? 0 : static_cast<size_t>(spec->n_neg) : 0;
    tr.local_dists.resize(n_refs);
    tr.l6_diffs.resize(n_refs);
    tr.mode_coeffs.resize(n_modes);
    tr.exterior_energy.resize(cfg.ext_offsets.size());

    const double w_n0 = lf.w_at(g.n());
    const double w_n1_0 = lf.w_at(g.n() - 1);
    const double contact_scale = std::max(1.0, pair_norm_h1l2(data));

    double e0 = 0.0;
    double prev_l10_p5 = 0.0;
    double strich = 0.0;
    bool have_prev_sample = false;
    double prev_sample_t = 0.0;

    auto sample = [&](double t) {
        const RadialPair p = lf.state();
        tr.times.push_back(t);
        const double e = energy(p, v);
        tr.energy.push_back(e);
        if (tr.times.size() == 1) e0 = e;
        const double a = std::min(cfg.local_radius, g.r_max());
        // local energy over r <= A
        {
            RadialField du = radial_derivative(p.u);
            RadialField dens(p.u.grid);
            for (int i = 0; i < dens.nodes(); ++i) {
                const double u = p.u[i];
                const double u2 = u * u;
                dens[i] = 0.5 * du[i] * du[i] + 0.5 * p.ut[i] * p.ut[i] - 0.5 * v[i] * u2 +
                          u2 * u2 * u2 / 6.0;
            }
            tr.local_energy.push_back(integral_r2_between(dens, 0.0, a));
        }
        for (size_t k = 0; k < cfg.ext_offsets.size(); ++k) {
            const double rho_in = cfg.ext_offsets[k] + t;
            tr.exterior_energy[k].push_back(
                rho_in >= g.r_max() ? 0.0 : annulus_energy(p, rho_in, g.r_max()));
        }
        for (size_t j = 0; j < n_refs; ++j) {
            tr.local_dists[j].push_back(local_pair_dist(p, references[j].phi, cfg.local_radius));
            tr.l6_diffs[j].push_back(l6_norm(add_scaled(p.u, references[j].phi, -1.0)));
        }
        if (n_modes > 0) {
            const RadialField diff =
                add_scaled(p.u, references[static_cast<size_t>(primary_ref)].phi, -1.0);
            for (size_t m = 0; m < n_modes; ++m)
                tr.mode_coeffs[m].push_back(inner_l2(diff, spec->eigs[m].rho));
        }
        // Strichartz-norm surrogate for u - phi_p (phi_p = 0 without refs);
        // recorded only, no claim attached to its size
        {
            const RadialField diff =
                n_refs > 0 ? add_scaled(p.u, references[static_cast<size_t>(primary_ref)].phi, -1.0)
                           : p.u;
            const double l10 = lp_norm(diff, 10);
            const double l10_p5 = std::pow(l10, 5);
            if (have_prev_sample) strich += 0.5 * (prev_l10_p5 + l10_p5) * (t - prev_sample_t);
            prev_l10_p5 = l10_p5;
            prev_sample_t = t;
            have_prev_sample = true;
            tr.strichartz_surrogate.push_back(strich);
        }
        const double denom = std::max(std::abs(e0), 1.0);
        if (t < tr.first_contact_time && std::abs(e - e0) / denom > cfg.drift_tol)
            tr.drift_exceeded = true;
    };

    sample(0.0);
    if (cfg.snapshot_stride > 0) {
        tr.snapshot_times.push_back(0.0);
        tr.snapshots.push_back(lf.state());
    }

    for (long k = 1; k <= n_steps; ++k) {
        lf.advance();
        const double t = k * dt;
        if (!std::isfinite(tr.first_contact_time)) {
            const double move = std::abs(lf.w_at(g.n()) - w_n0) +
                                std::abs(lf.w_at(g.n() - 1) - w_n1_0);
            if (move > 1e-9 * contact_scale) tr.first_contact_time = t;
        }
        if (k % 64 == 0 && !lf.finite()) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "evolution produced NaN near t=%.6g", t);
            throw numerical_error(buf);
        }
        if (cfg.snapshot_stride > 0 && k % cfg.snapshot_stride == 0) {
            tr.snapshot_times.push_back(t);
            tr.snapshots.push_back(lf.state());
        }
        if (k % stride == 0 || k == n_steps) sample(t);
    }
    if (!lf.finite()) throw numerical_error("evolution produced NaN by t_end");

    tr.final_state = lf.state();
    return tr;
}

}  // namespace critwave
