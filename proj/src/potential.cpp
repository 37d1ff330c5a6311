#include "critwave/potential.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace critwave {

double y_norm_on_grid(const RadialField& v, double beta) {
    double m = 0.0;
    const Grid& g = *v.grid;
    for (int i = 0; i < v.nodes(); ++i)
        m = std::max(m, std::pow(1.0 + g.r(i), beta) * std::abs(v[i]));
    return m;
}

RadialField aubin_talenti(const GridPtr& grid) {
    RadialField w(grid);
    for (int i = 0; i < w.nodes(); ++i) {
        const double r = grid->r(i);
        w[i] = 1.0 / std::sqrt(1.0 + r * r / 3.0);
    }
    return w;
}

RadialField aubin_talenti_scaled(const GridPtr& grid, double lambda) {
    if (!(lambda > 0.0)) throw std::domain_error("aubin_talenti_scaled: lambda must be > 0");
    const double amp = std::sqrt(lambda);
    RadialField w(grid);
    for (int i = 0; i < w.nodes(); ++i) {
        const double s = lambda * grid->r(i);
        w[i] = amp / std::sqrt(1.0 + s * s / 3.0);
    }
    return w;
}

RadialField rescale_profile(const RadialField& f, double lambda) {
    if (!(lambda > 0.0)) throw std::domain_error("rescale_profile: lambda must be > 0");
    const Grid& g = *f.grid;
    const double amp = std::sqrt(lambda);
    const double tail = f[g.n()] * g.r_max();  // c in f ~ c/r
    RadialField out(f.grid);
    for (int i = 0; i < out.nodes(); ++i) {
        const double s = lambda * g.r(i);
        if (s <= g.r_max()) {
            const double x = s / g.dr();
            const int k = std::min(static_cast<int>(x), g.n() - 1);
            const double t = x - k;
            out[i] = amp * ((1.0 - t) * f[k] + t * f[k + 1]);
        } else {
            out[i] = amp * tail / s;
        }
    }
    return out;
}

Potential composite_potential(const GridPtr& grid, double lambda) {
    if (!(lambda >= 1.0)) throw std::invalid_argument("composite_potential: need lambda >= 1");
    const double l2 = lambda * lambda;
    RadialField v(grid);
    for (int i = 0; i < v.nodes(); ++i) {
        const double r = grid->r(i);
        const double w = 1.0 / (1.0 + r * r / 3.0);   // W^2
        const double s = lambda * r;
        const double wl = 1.0 / (1.0 + s * s / 3.0);  // W^2(lambda r)
        v[i] = 2.0 * w * w + 2.0 * l2 * wl * wl;
    }
    Potential p{std::move(v), 4.0, 0.0, false};
    p.y_norm = y_norm_on_grid(p.values, p.beta);
    p.under_resolved = grid->dr() * 8.0 > 1.0 / lambda;
    return p;
}

Potential scaled_family(const Potential& v, double alpha) {
    if (!(alpha >= 0.0)) throw std::invalid_argument("scaled_family: need alpha >= 0");
    Potential p = v;
    for (double& x : p.values.u) x *= alpha;
    p.y_norm = alpha * v.y_norm;
    return p;
}

Potential gaussian_potential(const GridPtr& grid, double amplitude, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_potential: need sigma > 0");
    RadialField v(grid);
    for (int i = 0; i < v.nodes(); ++i) {
        const double x = grid->r(i) / sigma;
        v[i] = amplitude * std::exp(-x * x);
    }
    Potential p{std::move(v), 4.0, 0.0, false};
    p.y_norm = y_norm_on_grid(p.values, p.beta);
    p.under_resolved = grid->dr() * 8.0 > sigma;
    return p;
}

Potential table_potential(const GridPtr& grid, std::span<const double> r,
                          std::span<const double> v, double beta) {
    if (r.size() != v.size() || r.size() < 2)
        throw std::invalid_argument("table_potential: need matching r/v arrays of size >= 2");
    if (!std::is_sorted(r.begin(), r.end()))
        throw std::invalid_argument("table_potential: r must be sorted");
    if (!(beta > 2.0)) throw std::invalid_argument("table_potential: need beta > 2");
    RadialField out(grid);
    for (int i = 0; i < out.nodes(); ++i) {
        const double x = grid->r(i);
        if (x < r.front() || x > r.back()) {
            out[i] = 0.0;
            continue;
        }
        const auto it = std::upper_bound(r.begin(), r.end(), x);
        const size_t k = std::max<size_t>(1, static_cast<size_t>(it - r.begin())) - 1;
        const size_t k1 = std::min(k + 1, r.size() - 1);
        const double t = (r[k1] > r[k]) ? (x - r[k]) / (r[k1] - r[k]) : 0.0;
        out[i] = (1.0 - t) * v[k] + t * v[k1];
    }
    Potential p{std::move(out), beta, 0.0, false};
    p.y_norm = y_norm_on_grid(p.values, p.beta);
    return p;
}

Potential zero_potential(const GridPtr& grid) {
    return Potential{RadialField(grid), 4.0, 0.0, false};
}

Potential potential_from_json(const GridPtr& grid, const nlohmann::json& spec) {
    if (!spec.is_object()) throw std::invalid_argument("potential: expected a JSON object");
    if (!spec.contains("kind")) throw std::invalid_argument("potential: missing \"kind\"");
    const std::string kind = spec.at("kind").get<std::string>();

    auto require_keys = [&](const std::set<std::string>& allowed) {
        for (const auto& [key, _] : spec.items())
            if (!allowed.contains(key))
                throw std::invalid_argument("potential: unknown key \"" + key + "\"");
    };

    if (kind == "composite") {
        require_keys({"kind", "lambda"});
        return composite_potential(grid, spec.at("lambda").get<double>());
    }
    if (kind == "gaussian") {
        require_keys({"kind", "amplitude", "width"});
        return gaussian_potential(grid, spec.at("amplitude").get<double>(),
                                  spec.at("width").get<double>());
    }
    if (kind == "table") {
        require_keys({"kind", "r", "v", "beta"});
        const auto rv = spec.at("r").get<std::vector<double>>();
        const auto vv = spec.at("v").get<std::vector<double>>();
        return table_potential(grid, rv, vv, spec.at("beta").get<double>());
    }
    if (kind == "zero") {
        require_keys({"kind"});
        return zero_potential(grid);
    }
    throw std::invalid_argument("potential: unknown kind \"" + kind + "\"");
}

}  // namespace critwave
