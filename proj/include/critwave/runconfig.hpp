#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "critwave/grid.hpp"
#include "critwave/potential.hpp"
#include "critwave/steady.hpp"

namespace critwave {

/// Parsed experiment configuration.  The schema is strict: unknown keys
/// anywhere in the document are rejected before any computation runs.
struct RunConfig {
    int n = 0;
    double r_max = 0.0;
    nlohmann::ordered_json potential;
    std::string experiment;
    nlohmann::ordered_json params;
    std::uint64_t seed = 0;
    nlohmann::ordered_json raw;  // the validated document, echoed to the manifest

    GridPtr make_grid_ptr() const;
    Potential make_potential(const GridPtr& g) const;
};

RunConfig parse_config(const nlohmann::ordered_json& doc);
RunConfig parse_config_file(const std::string& path);

/// Builds a RadialPair from a data spec: {"kind":"zero"} | {"kind":"bump",...}
/// | {"kind":"gaussian",...} | {"kind":"state","index":k} |
/// {"kind":"seeded_bumps",...} | {"kind":"sum","terms":[...]}.
/// The seed drives every seeded term; "state" terms resolve against the
/// steady-state catalog computed for the run.
class DataBuilder {
public:
    DataBuilder(GridPtr grid, std::uint64_t seed);

    void set_catalog(const std::vector<SteadyState>* catalog) { catalog_ = catalog; }

    RadialPair build(const nlohmann::ordered_json& spec) const;

private:
    RadialPair build_term(const nlohmann::ordered_json& spec, std::uint64_t& seed_cursor) const;

    GridPtr grid_;
    std::uint64_t seed_;
    const std::vector<SteadyState>* catalog_ = nullptr;
};

/// Runs the configured experiment, writing its artifacts plus manifest.json
/// under out_dir.  Returns 0 on success.  Throws std::invalid_argument /
/// std::domain_error on contract violations and numerical_error on solver
/// failures; the CLI maps these to exit codes 2 and 3.
int run_experiment(const RunConfig& cfg, const std::string& out_dir, int jobs = 1);

}  // namespace critwave
