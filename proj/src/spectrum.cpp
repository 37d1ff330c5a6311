#include "critwave/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "critwave/errors.hpp"
#include "rk45.hpp"
#include "tridiag.hpp"

namespace critwave {

namespace {
constexpr double kFourPi = 4.0 * 3.14159265358979323846;
}

Tridiagonal assemble_linearized(const Potential& v, const RadialField& phi) {
    require_same_grid(v.values, phi);
    const Grid& g = *v.grid();
    const int n = g.n();
    const double inv_dr2 = 1.0 / (g.dr() * g.dr());
    Tridiagonal t;
    t.diag.resize(static_cast<size_t>(n) - 1);
    t.off.assign(static_cast<size_t>(n) - 2, -inv_dr2);
    for (int i = 1; i < n; ++i) {
        const double p4 = phi[i] * phi[i] * phi[i] * phi[i];
        t.diag[static_cast<size_t>(i) - 1] = 2.0 * inv_dr2 - v[i] + 5.0 * p4;
    }
    return t;
}

Tridiagonal assemble_schroedinger(const Potential& v) {
    return assemble_linearized(v, RadialField(v.grid()));
}

int sturm_count_below(const Tridiagonal& t, double x) {
    const int m = t.size();
    int count = 0;
    double d = 1.0;
    for (int i = 0; i < m; ++i) {
        const double off2 = (i > 0) ? t.off[static_cast<size_t>(i) - 1] * t.off[static_cast<size_t>(i) - 1] : 0.0;
        d = t.diag[static_cast<size_t>(i)] - x - (i > 0 ? off2 / d : 0.0);
        if (d == 0.0) d = -1e-300;  // treat exact hit as just below
        if (d < 0.0) ++count;
    }
    return count;
}

namespace {

std::pair<double, double> gershgorin_bounds(const Tridiagonal& t) {
    const int m = t.size();
    double lo = t.diag[0], hi = t.diag[0];
    for (int i = 0; i < m; ++i) {
        double radius = 0.0;
        if (i > 0) radius += std::abs(t.off[static_cast<size_t>(i) - 1]);
        if (i + 1 < m) radius += std::abs(t.off[static_cast<size_t>(i)]);
        lo = std::min(lo, t.diag[static_cast<size_t>(i)] - radius);
        hi = std::max(hi, t.diag[static_cast<size_t>(i)] + radius);
    }
    return {lo, hi};
}

// one inverse-iteration eigenvector for eigenvalue lambda, orthogonalized
// against previously found vectors (discrete l2)
double inf_norm(const Tridiagonal& t) {
    double m = 0.0;
    for (int i = 0; i < t.size(); ++i) {
        double row = std::abs(t.diag[static_cast<size_t>(i)]);
        if (i > 0) row += std::abs(t.off[static_cast<size_t>(i) - 1]);
        if (i + 1 < t.size()) row += std::abs(t.off[static_cast<size_t>(i)]);
        m = std::max(m, row);
    }
    return m;
}

std::vector<double> inverse_iteration(const Tridiagonal& t, double lambda,
                                      const std::vector<std::vector<double>>& prev,
                                      unsigned seed) {
    const int m = t.size();
    const double scale = std::max(std::abs(lambda), inf_norm(t));

    auto apply = [&](const std::vector<double>& x, std::vector<double>& out) {
        for (int i = 0; i < m; ++i) {
            double acc = t.diag[static_cast<size_t>(i)] * x[static_cast<size_t>(i)];
            if (i > 0) acc += t.off[static_cast<size_t>(i) - 1] * x[static_cast<size_t>(i) - 1];
            if (i + 1 < m) acc += t.off[static_cast<size_t>(i)] * x[static_cast<size_t>(i) + 1];
            out[static_cast<size_t>(i)] = acc;
        }
    };
    auto orthogonalize = [&](std::vector<double>& x) {
        for (const auto& q : prev) {
            double dot = 0.0;
            for (int i = 0; i < m; ++i) dot += x[static_cast<size_t>(i)] * q[static_cast<size_t>(i)];
            for (int i = 0; i < m; ++i) x[static_cast<size_t>(i)] -= dot * q[static_cast<size_t>(i)];
        }
    };
    auto normalize = [&](std::vector<double>& x) {
        double nrm = 0.0;
        for (double v : x) nrm += v * v;
        nrm = std::sqrt(nrm);
        if (nrm == 0.0) return false;
        for (double& v : x) v /= nrm;
        return true;
    };

    std::vector<double> work(static_cast<size_t>(m));
    std::vector<double> best;
    double best_res = std::numeric_limits<double>::infinity();

    for (int attempt = 0; attempt < 5; ++attempt) {
        const double shift = lambda + attempt * 1e-13 * scale;
        std::mt19937_64 rng(0x9e3779b97f4a7c15ull ^ (seed + 977u * static_cast<unsigned>(attempt)));
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        std::vector<double> x(static_cast<size_t>(m));
        for (double& v : x) v = unif(rng);
        orthogonalize(x);
        if (!normalize(x)) continue;

        int stalled = 0;
        for (int it = 0; it < 40 && stalled < 3; ++it) {
            std::vector<double> sub(t.off), sup(t.off), diag(t.diag);
            for (double& d : diag) d -= shift;
            std::vector<double> y = x;
            detail::solve_tridiagonal(std::move(sub), std::move(diag), std::move(sup), y);
            orthogonalize(y);
            if (!normalize(y)) break;
            apply(y, work);
            double res = 0.0;
            for (int i = 0; i < m; ++i) {
                const double rdiff = work[static_cast<size_t>(i)] - lambda * y[static_cast<size_t>(i)];
                res += rdiff * rdiff;
            }
            res = std::sqrt(res);
            x = y;
            if (res < best_res) {
                best_res = res;
                best = y;
                stalled = 0;
            } else {
                ++stalled;
            }
            if (res <= 16.0 * std::numeric_limits<double>::epsilon() * scale) return x;
        }
        if (best_res <= 1e-10 * scale) return best;
    }
    if (best_res <= 1e-8 * scale) return best;
    throw numerical_error("inverse iteration stagnated after 5 shift retries");
}

}  // namespace

double kth_eigenvalue(const Tridiagonal& t, int k, double abs_tol) {
    if (k < 0 || k >= t.size()) throw std::invalid_argument("kth_eigenvalue: index out of range");
    auto [lo, hi] = gershgorin_bounds(t);
    while (hi - lo > abs_tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // bisection exhausted the mantissa
        if (sturm_count_below(t, mid) > k)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

SpectralData negative_eigenpairs(const Tridiagonal& t, const GridPtr& grid) {
    if (t.size() != grid->n() - 1)
        throw std::invalid_argument("negative_eigenpairs: matrix does not match grid");
    const int m_neg = sturm_count_below(t, 0.0);

    SpectralData out;
    out.n_neg = m_neg;

    const Grid& g = *grid;
    const int n = g.n();
    const double dr = g.dr();

    std::vector<std::vector<double>> vectors;
    for (int j = 0; j < m_neg; ++j) {
        const double lambda = kth_eigenvalue(t, j);
        std::vector<double> w = inverse_iteration(t, lambda, vectors, static_cast<unsigned>(j));
        vectors.push_back(w);

        // interior vector -> w on all nodes (Dirichlet ends), then rho = w/r
        // normalized in L^2(R^3); trapezoid with vanishing ends reduces to
        // dr * sum over interior nodes
        double q = 0.0;
        for (double x : w) q += x * x;
        const double nrm = std::sqrt(kFourPi * dr * q);

        RadialField rho(grid);
        for (int i = 1; i < n; ++i) rho[i] = w[static_cast<size_t>(i) - 1] / (nrm * g.r(i));
        rho[0] = (4.0 * w[0] - w[1]) / (2.0 * dr * nrm);  // lim w/r = w'(0)
        rho[n] = 0.0;

        // residual of the L^2(R^3)-normalized eigenfunction
        double res_sq = 0.0;
        for (int i = 0; i < t.size(); ++i) {
            double acc = t.diag[static_cast<size_t>(i)] * w[static_cast<size_t>(i)];
            if (i > 0) acc += t.off[static_cast<size_t>(i) - 1] * w[static_cast<size_t>(i) - 1];
            if (i + 1 < t.size()) acc += t.off[static_cast<size_t>(i)] * w[static_cast<size_t>(i) + 1];
            const double rdiff = acc - lambda * w[static_cast<size_t>(i)];
            res_sq += rdiff * rdiff;
        }
        const double res = std::sqrt(kFourPi * dr * res_sq) / nrm;

        out.eigs.push_back(EigenPair{lambda, std::sqrt(-lambda), std::move(rho), res});
    }

    if (m_neg < t.size()) {
        const double lambda_next = kth_eigenvalue(t, m_neg);
        if (m_neg == 0)
            out.gap = lambda_next;
        else {
            const double top_neg = out.eigs.back().eigenvalue;
            out.gap = (std::abs(top_neg) <= std::abs(lambda_next)) ? top_neg : lambda_next;
        }
    } else if (m_neg > 0) {
        out.gap = out.eigs.back().eigenvalue;
    }
    return out;
}

Classification classify(const Potential& v, const RadialField& phi, double gap_tol) {
    const Tridiagonal t = assemble_linearized(v, phi);
    const SpectralData spec = negative_eigenpairs(t, v.grid());
    Classification c;
    c.n_unstable = spec.n_neg;
    c.kind = (spec.n_neg == 0) ? StabilityKind::Stable : StabilityKind::Unstable;
    c.near_degenerate = std::abs(spec.gap) <= gap_tol;
    return c;
}

double unstable_coefficient(const RadialPair& pair, const RadialField& phi,
                            const SpectralData& spec, int j) {
    if (j < 0 || j >= spec.n_neg)
        throw std::invalid_argument("unstable_coefficient: mode index out of range");
    require_same_grid(pair.u, phi);
    const EigenPair& e = spec.eigs[static_cast<size_t>(j)];
    require_same_grid(pair.u, e.rho);
    const RadialField diff = add_scaled(pair.u, phi, -1.0);
    const double kj = e.k;
    return (kj * inner_l2(diff, e.rho) + inner_l2(pair.ut, e.rho)) / (2.0 * kj);
}

int oscillation_count(const Potential& v, const RadialField& phi) {
    require_same_grid(v.values, phi);
    const Grid& g = *v.grid();
    // q(r) = -V + 5 phi^4, linearly interpolated between nodes
    auto q_at = [&](double r) {
        const double x = std::clamp(r / g.dr(), 0.0, static_cast<double>(g.n()));
        const int k = std::min(static_cast<int>(x), g.n() - 1);
        const double t = x - k;
        auto node = [&](int i) {
            const double p4 = phi[i] * phi[i] * phi[i] * phi[i];
            return -v[i] + 5.0 * p4;
        };
        return (1.0 - t) * node(k) + t * node(k + 1);
    };

    detail::State<2> y{g.dr() * 1e-3, 1.0};  // w ~ r near the origin
    detail::Rk45Options opt;
    opt.h_max = g.dr();
    opt.rel_tol = 1e-10;
    opt.abs_tol = 1e-14;

    int changes = 0;
    double last_sign = 1.0;
    double max_abs = std::abs(y[0]);
    auto watch = [&](double /*r*/, const detail::State<2>& s) {
        max_abs = std::max(max_abs, std::abs(s[0]));
        if (s[0] != 0.0) {
            const double sgn = (s[0] > 0.0) ? 1.0 : -1.0;
            if (sgn != last_sign && std::abs(s[0]) > 1e-14 * max_abs) {
                ++changes;
                last_sign = sgn;
            }
        }
        return true;
    };
    auto f = [&](double r, const detail::State<2>& s, detail::State<2>& dy) {
        dy[0] = s[1];
        dy[1] = q_at(r) * s[0];
    };
    detail::rk45_integrate<2>(f, g.dr() * 1e-3, g.r_max(), y, opt, watch);
    return changes;
}

}  // namespace critwave
