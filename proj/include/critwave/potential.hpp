#pragma once

#include <nlohmann/json_fwd.hpp>

#include "critwave/grid.hpp"

namespace critwave {

/// Sampled radial potential with its decay metadata: beta > 2 and
/// y_norm = sup_i (1+r_i)^beta |V(r_i)|.
struct Potential {
    RadialField values;
    double beta = 4.0;
    double y_norm = 0.0;
    /// Set when the inner structure of the potential has fewer than 8 grid
    /// nodes (scale-separated bubbles at large lambda).
    bool under_resolved = false;

    const GridPtr& grid() const { return values.grid; }
    double operator[](int i) const { return values[i]; }
};

double y_norm_on_grid(const RadialField& v, double beta);

/// Aubin-Talenti profile W(r) = (1 + r^2/3)^{-1/2}.
RadialField aubin_talenti(const GridPtr& grid);

/// W_lambda sampled analytically at the nodes: lambda^{1/2} W(lambda r).
RadialField aubin_talenti_scaled(const GridPtr& grid, double lambda);

/// H^1-invariant rescaling lambda^{1/2} f(lambda r) of a sampled field.
/// Values beyond r_max are extrapolated with the 1/r tail of the field.
RadialField rescale_profile(const RadialField& f, double lambda);

/// V = 2 W^4 + 2 lambda^2 W^4(lambda r), the two-bubble potential that
/// admits a large stable excited state; beta = 4.
Potential composite_potential(const GridPtr& grid, double lambda);

/// alpha * V, the coupling family used in bifurcation experiments.
Potential scaled_family(const Potential& v, double alpha);

/// V(r) = A exp(-r^2/sigma^2).
Potential gaussian_potential(const GridPtr& grid, double amplitude, double sigma);

/// Tabulated potential, linearly interpolated onto the grid (zero beyond
/// the last table radius).
Potential table_potential(const GridPtr& grid, std::span<const double> r,
                          std::span<const double> v, double beta);

Potential zero_potential(const GridPtr& grid);

/// Schema: {"kind":"composite","lambda":8} | {"kind":"gaussian","amplitude":A,"width":sigma}
///       | {"kind":"table","r":[...],"v":[...],"beta":beta} | {"kind":"zero"}
/// Unknown kinds or keys are rejected.
Potential potential_from_json(const GridPtr& grid, const nlohmann::json& spec);

}  // namespace critwave
