#include "critwave/runconfig.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <stdexcept>

#include "critwave/diagnostics.hpp"
#include "critwave/errors.hpp"
#include "critwave/evolve.hpp"
#include "critwave/manifold.hpp"
#include "critwave/spectrum.hpp"
#include "critwave/version.hpp"

namespace critwave {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

void check_keys(const ojson& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw std::invalid_argument("config: " + where + " must be an object");
    for (const auto& [key, _] : j.items())
        if (!allowed.contains(key))
            throw std::invalid_argument("config: unknown key \"" + key + "\" in " + where);
}

double num(const ojson& j, const std::string& key, const std::string& where) {
    if (!j.contains(key))
        throw std::invalid_argument("config: missing \"" + key + "\" in " + where);
    if (!j.at(key).is_number())
        throw std::invalid_argument("config: \"" + key + "\" in " + where + " must be a number");
    return j.at(key).get<double>();
}

double num_or(const ojson& j, const std::string& key, double dflt) {
    return j.contains(key) ? j.at(key).get<double>() : dflt;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

class CsvWriter {
public:
    explicit CsvWriter(const fs::path& path) : out_(path) {
        if (!out_) throw std::runtime_error("cannot open " + path.string());
    }
    void header(const std::vector<std::string>& cols) {
        for (size_t i = 0; i < cols.size(); ++i) out_ << (i ? "," : "") << cols[i];
        out_ << "\n";
    }
    void row(const std::vector<double>& vals) {
        for (size_t i = 0; i < vals.size(); ++i) out_ << (i ? "," : "") << fmt(vals[i]);
        out_ << "\n";
    }

private:
    std::ofstream out_;
};

void write_json(const fs::path& path, const ojson& doc) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << doc.dump(2) << "\n";
}

void write_profile_csv(const fs::path& path, const RadialField& f,
                       const std::vector<std::string>& cols = {"r", "phi"}) {
    CsvWriter csv(path);
    csv.header(cols);
    const Grid& g = *f.grid;
    for (int i = 0; i < f.nodes(); ++i) csv.row({g.r(i), f[i]});
}

void write_pair_csv(const fs::path& path, const RadialPair& p) {
    CsvWriter csv(path);
    csv.header({"r", "u", "ut"});
    const Grid& g = *p.u.grid;
    for (int i = 0; i < p.u.nodes(); ++i) csv.row({g.r(i), p.u[i], p.ut[i]});
}

ojson state_json(const SteadyState& s, int index) {
    ojson j;
    j["index"] = index;
    j["a"] = s.shoot_param;
    j["sign_changes"] = s.sign_changes;
    j["J"] = s.energy_J;
    j["residual"] = s.residual;
    j["decay_const"] = s.decay_const;
    j["under_resolved"] = s.under_resolved;
    return j;
}

struct ScanParams {
    double a_min, a_max;
    int n_scan;
};

ScanParams parse_scan(const ojson& j, const std::string& where) {
    check_keys(j, {"a_min", "a_max", "n_scan"}, where);
    ScanParams s{num(j, "a_min", where), num(j, "a_max", where),
                 static_cast<int>(num(j, "n_scan", where))};
    return s;
}

std::vector<SteadyState> catalog_from(const ojson& params, const Potential& v, int jobs,
                                      const std::string& key = "scan") {
    if (!params.contains(key))
        throw std::invalid_argument("config: experiment needs a \"" + key + "\" block");
    const ScanParams sp = parse_scan(params.at(key), key);
    SteadyOptions opt;
    opt.jobs = jobs;
    return find_steady_states(v, sp.a_min, sp.a_max, sp.n_scan, opt);
}

EvolveConfig evolve_config_from(const ojson& p, double dr) {
    EvolveConfig cfg;
    cfg.t_end = num(p, "t_end", "params");
    cfg.dt = num_or(p, "dt", 0.0);
    cfg.cfl = num_or(p, "cfl", 0.9);
    cfg.sample_dt = num_or(p, "sample_dt", 1.0);
    cfg.local_radius = num_or(p, "local_radius", 10.0);
    cfg.snapshot_stride = static_cast<int>(num_or(p, "snapshot_stride", 0.0));
    cfg.drift_tol = num_or(p, "drift_tol", 1e-6);
    if (p.contains("nonlinear")) cfg.nonlinear = p.at("nonlinear").get<bool>();
    if (p.contains("boundary")) {
        const std::string b = p.at("boundary").get<std::string>();
        if (b == "outgoing")
            cfg.boundary = Boundary::Outgoing;
        else if (b == "reflecting")
            cfg.boundary = Boundary::ReflectingGuard;
        else
            throw std::invalid_argument("config: boundary must be \"outgoing\" or \"reflecting\"");
    }
    if (p.contains("ext_offsets")) cfg.ext_offsets = p.at("ext_offsets").get<std::vector<double>>();
    (void)dr;
    return cfg;
}

void write_trace_csv(const fs::path& path, const EvolutionTrace& tr,
                     const std::vector<double>& ext_offsets) {
    CsvWriter csv(path);
    std::vector<std::string> cols{"t", "E", "E_local"};
    for (double off : ext_offsets) cols.push_back("E_ext@" + fmt(off));
    for (size_t j = 0; j < tr.local_dists.size(); ++j) cols.push_back("d_" + std::to_string(j + 1));
    for (size_t m = 0; m < tr.mode_coeffs.size(); ++m)
        cols.push_back("lambda_" + std::to_string(m + 1));
    for (size_t j = 0; j < tr.l6_diffs.size(); ++j) cols.push_back("l6_" + std::to_string(j + 1));
    cols.push_back("st_l5l10");
    csv.header(cols);
    for (int k = 0; k < tr.samples(); ++k) {
        std::vector<double> row{tr.times[static_cast<size_t>(k)], tr.energy[static_cast<size_t>(k)],
                                tr.local_energy[static_cast<size_t>(k)]};
        for (const auto& ext : tr.exterior_energy) row.push_back(ext[static_cast<size_t>(k)]);
        for (const auto& d : tr.local_dists) row.push_back(d[static_cast<size_t>(k)]);
        for (const auto& lam : tr.mode_coeffs) row.push_back(lam[static_cast<size_t>(k)]);
        for (const auto& l6 : tr.l6_diffs) row.push_back(l6[static_cast<size_t>(k)]);
        row.push_back(tr.strichartz_surrogate[static_cast<size_t>(k)]);
        csv.row(row);
    }
}

void write_snapshots(const fs::path& dir, const EvolutionTrace& tr) {
    for (size_t k = 0; k < tr.snapshots.size(); ++k) {
        char name[64];
        std::snprintf(name, sizeof name, "snapshot_%06zu.csv", k);
        write_pair_csv(dir / name, tr.snapshots[k]);
    }
}

}  // namespace

GridPtr RunConfig::make_grid_ptr() const { return make_grid(n, r_max); }

Potential RunConfig::make_potential(const GridPtr& g) const {
    if (potential.is_null())
        throw std::invalid_argument("config: this experiment requires a \"potential\"");
    return potential_from_json(g, potential);
}

RunConfig parse_config(const ojson& doc) {
    check_keys(doc, {"grid", "potential", "experiment", "params", "seed", "output_dir"}, "config");
    if (!doc.contains("grid")) throw std::invalid_argument("config: missing \"grid\"");
    check_keys(doc.at("grid"), {"n", "r_max"}, "grid");

    RunConfig cfg;
    cfg.n = static_cast<int>(num(doc.at("grid"), "n", "grid"));
    cfg.r_max = num(doc.at("grid"), "r_max", "grid");
    if (doc.contains("potential")) cfg.potential = doc.at("potential");
    if (!doc.contains("experiment")) throw std::invalid_argument("config: missing \"experiment\"");
    cfg.experiment = doc.at("experiment").get<std::string>();
    static const std::set<std::string> kExperiments{
        "steady", "spectrum", "evolve", "channel", "resolve", "threshold", "excited-construct"};
    if (!kExperiments.contains(cfg.experiment))
        throw std::invalid_argument("config: unknown experiment \"" + cfg.experiment + "\"");
    if (!doc.contains("params")) throw std::invalid_argument("config: missing \"params\"");
    cfg.params = doc.at("params");
    if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();
    cfg.raw = doc;
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    ojson doc;
    try {
        doc = ojson::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("config: JSON parse error: ") + e.what());
    }
    return parse_config(doc);
}

DataBuilder::DataBuilder(GridPtr grid, std::uint64_t seed) : grid_(std::move(grid)), seed_(seed) {}

RadialPair DataBuilder::build(const ojson& spec) const {
    std::uint64_t cursor = seed_;
    return build_term(spec, cursor);
}

RadialPair DataBuilder::build_term(const ojson& spec, std::uint64_t& seed_cursor) const {
    if (!spec.is_object() || !spec.contains("kind"))
        throw std::invalid_argument("data spec: expected an object with \"kind\"");
    const std::string kind = spec.at("kind").get<std::string>();
    const Grid& g = *grid_;
    RadialPair out{RadialField(grid_), RadialField(grid_)};

    auto component_field = [&](const ojson& j) -> RadialField& {
        const std::string c = j.contains("component") ? j.at("component").get<std::string>() : "u";
        if (c == "u") return out.u;
        if (c == "ut") return out.ut;
        throw std::invalid_argument("data spec: component must be \"u\" or \"ut\"");
    };

    if (kind == "zero") {
        check_keys(spec, {"kind"}, "data spec");
        return out;
    }
    if (kind == "bump") {
        check_keys(spec, {"kind", "component", "amplitude", "center", "width"}, "data spec");
        const double a = num(spec, "amplitude", "bump");
        const double c = num(spec, "center", "bump");
        const double w = num(spec, "width", "bump");
        if (!(w > 0.0)) throw std::invalid_argument("data spec: bump width must be > 0");
        RadialField& f = component_field(spec);
        for (int i = 0; i < f.nodes(); ++i) {
            const double s = (g.r(i) - c) / w;
            if (std::abs(s) < 1.0) f[i] = a * std::exp(1.0 - 1.0 / (1.0 - s * s));
        }
        return out;
    }
    if (kind == "gaussian") {
        check_keys(spec, {"kind", "component", "amplitude", "center", "width"}, "data spec");
        const double a = num(spec, "amplitude", "gaussian");
        const double c = num(spec, "center", "gaussian");
        const double w = num(spec, "width", "gaussian");
        RadialField& f = component_field(spec);
        for (int i = 0; i < f.nodes(); ++i) {
            const double s = (g.r(i) - c) / w;
            f[i] = a * std::exp(-s * s);
        }
        return out;
    }
    if (kind == "state") {
        check_keys(spec, {"kind", "index"}, "data spec");
        if (!catalog_)
            throw std::invalid_argument("data spec: \"state\" requires a steady-state scan");
        const int idx = static_cast<int>(num(spec, "index", "state"));
        if (idx < 0 || idx >= static_cast<int>(catalog_->size()))
            throw std::invalid_argument("data spec: state index out of range");
        out.u = (*catalog_)[static_cast<size_t>(idx)].phi;
        return out;
    }
    if (kind == "seeded_bumps") {
        check_keys(spec, {"kind", "component", "amplitude", "count", "r_lo", "r_hi", "width"},
                   "data spec");
        const double eps = num(spec, "amplitude", "seeded_bumps");
        const int count = static_cast<int>(num_or(spec, "count", 4.0));
        const double r_lo = num_or(spec, "r_lo", 2.0);
        const double r_hi = num_or(spec, "r_hi", 8.0);
        const double w = num_or(spec, "width", 1.0);
        RadialField& f = component_field(spec);
        std::mt19937_64 rng(seed_cursor++);
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        for (int k = 0; k < count; ++k) {
            const double c = (count == 1) ? r_lo : r_lo + (r_hi - r_lo) * k / (count - 1);
            const double coeff = unif(rng);
            for (int i = 0; i < f.nodes(); ++i) {
                const double s = (g.r(i) - c) / w;
                if (std::abs(s) < 1.0) f[i] += coeff * std::exp(1.0 - 1.0 / (1.0 - s * s));
            }
        }
        const double nrm = pair_norm_h1l2(out);
        if (nrm > 0.0) {
            for (double& x : out.u.u) x *= eps / nrm;
            for (double& x : out.ut.u) x *= eps / nrm;
        }
        return out;
    }
    if (kind == "sum") {
        check_keys(spec, {"kind", "terms"}, "data spec");
        for (const auto& term : spec.at("terms")) {
            const RadialPair p = build_term(term, seed_cursor);
            out = pair_add_scaled(out, p, 1.0);
        }
        return out;
    }
    throw std::invalid_argument("data spec: unknown kind \"" + kind + "\"");
}

namespace {

void run_steady(const RunConfig& cfg, const fs::path& out, int jobs) {
    const GridPtr g = cfg.make_grid_ptr();
    const Potential v = cfg.make_potential(g);
    check_keys(cfg.params, {"a_min", "a_max", "n_scan", "write_profiles"}, "params");
    SteadyOptions opt;
    opt.jobs = jobs;
    std::vector<std::string> diags;
    opt.diagnostics = &diags;
    const auto states = find_steady_states(v, num(cfg.params, "a_min", "params"),
                                           num(cfg.params, "a_max", "params"),
                                           static_cast<int>(num(cfg.params, "n_scan", "params")), opt);
    ojson arr = ojson::array();
    for (size_t k = 0; k < states.size(); ++k)
        arr.push_back(state_json(states[k], static_cast<int>(k)));
    ojson doc;
    doc["states"] = arr;
    doc["diagnostics"] = diags;
    write_json(out / "states.json", doc);
    const bool profiles =
        !cfg.params.contains("write_profiles") || cfg.params.at("write_profiles").get<bool>();
    if (profiles)
        for (size_t k = 0; k < states.size(); ++k) {
            char name[48];
            std::snprintf(name, sizeof name, "state_%zu.csv", k);
            write_profile_csv(out / name, states[k].phi);
        }
}

void run_spectrum(const RunConfig& cfg, const fs::path& out, int jobs) {
    const GridPtr g = cfg.make_grid_ptr();
    const Potential v = cfg.make_potential(g);
    check_keys(cfg.params, {"phi", "write_profiles"}, "params");
    RadialField phi(g);
    if (cfg.params.contains("phi") && !cfg.params.at("phi").is_string()) {
        const ojson& pj = cfg.params.at("phi");
        check_keys(pj, {"scan", "index"}, "params.phi");
        const auto catalog = catalog_from(pj, v, jobs);
        const int idx = static_cast<int>(num(pj, "index", "params.phi"));
        if (idx < 0 || idx >= static_cast<int>(catalog.size()))
            throw std::invalid_argument("config: phi state index out of range");
        phi = catalog[static_cast<size_t>(idx)].phi;
    }
    const Tridiagonal t = assemble_linearized(v, phi);
    const SpectralData spec = negative_eigenpairs(t, g);
    const Classification cls = classify(v, phi);
    ojson doc;
    doc["n_neg"] = spec.n_neg;
    ojson eigs = ojson::array();
    for (const auto& e : spec.eigs) eigs.push_back(e.eigenvalue);
    doc["eigenvalues"] = eigs;
    doc["gap"] = spec.gap;
    ojson flags = ojson::array();
    if (cls.near_degenerate) flags.push_back("near-degenerate");
    doc["flags"] = flags;
    doc["classification"] = (cls.kind == StabilityKind::Stable) ? "stable" : "unstable";
    write_json(out / "spectrum.json", doc);
    if (cfg.params.contains("write_profiles") && cfg.params.at("write_profiles").get<bool>())
        for (size_t k = 0; k < spec.eigs.size(); ++k) {
            char name[48];
            std::snprintf(name, sizeof name, "rho_%zu.csv", k);
            write_profile_csv(out / name, spec.eigs[k].rho, {"r", "rho"});
        }
}

void run_evolve(const RunConfig& cfg, const fs::path& out, int jobs) {
    const GridPtr g = cfg.make_grid_ptr();
    const Potential v = cfg.make_potential(g);
    check_keys(cfg.params,
               {"data", "t_end", "dt", "cfl", "sample_dt", "local_radius", "snapshot_stride",
                "nonlinear", "boundary", "ext_offsets", "references", "modes", "drift_tol"},
               "params");
    EvolveConfig ecfg = evolve_config_from(cfg.params, g->dr());

    std::vector<SteadyState> catalog;
    if (cfg.params.contains("references"))
        catalog = catalog_from(cfg.params.at("references"), v, jobs);

    DataBuilder builder(g, cfg.seed);
    builder.set_catalog(&catalog);
    const RadialPair data = builder.build(cfg.params.at("data"));

    SpectralData spec;
    const SpectralData* spec_ptr = nullptr;
    int primary = 0;
    if (cfg.params.contains("modes")) {
        check_keys(cfg.params.at("modes"), {"index"}, "params.modes");
        primary = static_cast<int>(num(cfg.params.at("modes"), "index", "params.modes"));
        if (primary < 0 || primary >= static_cast<int>(catalog.size()))
            throw std::invalid_argument("config: modes index out of range");
        spec = negative_eigenpairs(assemble_linearized(v, catalog[static_cast<size_t>(primary)].phi), g);
        spec_ptr = &spec;
    }

    const EvolutionTrace tr = evolve(data, v, ecfg, catalog, spec_ptr, primary);
    write_trace_csv(out / "trace.csv", tr, ecfg.ext_offsets);
    write_snapshots(out, tr);
    ojson doc;
    doc["first_contact_time"] = std::isfinite(tr.first_contact_time)
                                    ? ojson(tr.first_contact_time)
                                    : ojson(nullptr);
    doc["drift_exceeded"] = tr.drift_exceeded;
    doc["samples"] = tr.samples();
    write_json(out / "evolve.json", doc);
}

void run_channel(const RunConfig& cfg, const fs::path& out, int jobs) {
    const GridPtr g = cfg.make_grid_ptr();
    const Potential v = cfg.make_potential(g);
    check_keys(cfg.params, {"data", "R", "t_end", "sample_dt", "refine", "scan"}, "params");
    std::vector<SteadyState> catalog;
    DataBuilder builder(g, cfg.seed);
    if (cfg.params.contains("scan")) {
        catalog = catalog_from(cfg.params, v, jobs);
        builder.set_catalog(&catalog);
    }
    const RadialPair data = builder.build(cfg.params.at("data"));
    ChannelOptions opt;
    opt.sample_dt = num_or(cfg.params, "sample_dt", 1.0);
    opt.refine_factor = static_cast<int>(num_or(cfg.params, "refine", 4.0));
    const auto [fwd, bwd] = channel_scan(data, v, num(cfg.params, "R", "params"),
                                         num(cfg.params, "t_end", "params"), opt);
    auto rep_json = [](const ChannelReport& r) {
        ojson j;
        j["R"] = r.R;
        j["min_ext_energy"] = r.min_ext_energy;
        j["times_sampled"] = r.times_sampled;
        j["ext_energies"] = r.ext_energies;
        return j;
    };
    ojson doc;
    doc["forward"] = rep_json(fwd);
    doc["backward"] = rep_json(bwd);
    write_json(out / "channel.json", doc);
}

void run_resolve(const RunConfig& cfg, const fs::path& out, int jobs) {
    const GridPtr g = cfg.make_grid_ptr();
    const Potential v = cfg.make_potential(g);
    check_keys(cfg.params,
               {"data", "t_end", "dt", "cfl", "sample_dt", "local_radius", "eps_scatter", "tau",
                "scan", "boundary", "drift_tol"},
               "params");
    const auto catalog = catalog_from(cfg.params, v, jobs);
    DataBuilder builder(g, cfg.seed);
    builder.set_catalog(&catalog);
    const RadialPair data = builder.build(cfg.params.at("data"));
    EvolveConfig ecfg = evolve_config_from(cfg.params, g->dr());
    const EvolutionTrace tr = evolve(data, v, ecfg, catalog);
    const ResolutionReport rep = detect_resolution(tr, num_or(cfg.params, "eps_scatter", 1e-2),
                                                   num_or(cfg.params, "tau", 20.0));
    write_trace_csv(out / "trace.csv", tr, ecfg.ext_offsets);
    ojson doc;
    doc["winner"] = rep.winner ? ojson(*rep.winner) : ojson(nullptr);
    doc["trailing_dist"] = rep.trailing_dist;
    doc["radiated_energy"] = rep.radiated_energy;
    doc["window"] = {rep.window_start, rep.window_end};
    ojson cat = ojson::array();
    for (size_t k = 0; k < catalog.size(); ++k)
        cat.push_back(state_json(catalog[k], static_cast<int>(k)));
    doc["catalog"] = cat;
    write_json(out / "resolution.json", doc);
}

void run_threshold(const RunConfig& cfg, const fs::path& out, int jobs) {
    const GridPtr g = cfg.make_grid_ptr();
    const Potential v = cfg.make_potential(g);
    check_keys(cfg.params,
               {"base", "direction", "s_range", "tol_s", "t_end", "dt", "cfl", "sample_dt",
                "local_radius", "eps_scatter", "tau", "scan", "phi_u_index", "archive_probes",
                "drift_tol"},
               "params");
    const auto catalog = catalog_from(cfg.params, v, jobs);
    DataBuilder builder(g, cfg.seed);
    builder.set_catalog(&catalog);
    DataFamily family;
    family.base = builder.build(cfg.params.at("base"));
    family.directions.push_back(builder.build(cfg.params.at("direction")));
    const auto range = cfg.params.at("s_range").get<std::vector<double>>();
    if (range.size() != 2) throw std::invalid_argument("config: s_range must be [lo, hi]");
    EvolveConfig ecfg = evolve_config_from(cfg.params, g->dr());
    ThresholdOptions topt;
    topt.eps_scatter = num_or(cfg.params, "eps_scatter", 1e-2);
    topt.tau = num_or(cfg.params, "tau", 20.0);
    topt.phi_u_index = static_cast<int>(num_or(cfg.params, "phi_u_index", 0.0));
    const ThresholdResult res = bisect_threshold(family, v, ecfg, catalog, range[0], range[1],
                                                 num(cfg.params, "tol_s", "params"), topt);
    ojson doc;
    doc["bracket"] = {res.s_lo, res.s_hi};
    doc["winners"] = {res.winner_lo ? ojson(*res.winner_lo) : ojson(nullptr),
                      res.winner_hi ? ojson(*res.winner_hi) : ojson(nullptr)};
    doc["width"] = res.width;
    doc["residence_time"] = res.residence_time;
    doc["probes"] = res.probes;
    doc["flagged_ambiguous"] = res.flagged_ambiguous;
    ojson samples = ojson::array();
    for (const auto& [w, t] : res.residence_samples) samples.push_back({w, t});
    doc["residence_samples"] = samples;
    ojson cat = ojson::array();
    for (size_t k = 0; k < catalog.size(); ++k)
        cat.push_back(state_json(catalog[k], static_cast<int>(k)));
    doc["catalog"] = cat;
    write_json(out / "threshold.json", doc);
}

void run_excited(const RunConfig& cfg, const fs::path& out) {
    const GridPtr g = cfg.make_grid_ptr();
    check_keys(cfg.params, {"lambda", "eps_target"}, "params");
    const double lambda = num(cfg.params, "lambda", "params");
    const ExcitedConstruction ec =
        construct_stable_excited(g, lambda, num_or(cfg.params, "eps_target", 0.5));
    const Potential v = composite_potential(g, lambda);
    const Classification cls = classify(v, ec.state.phi);
    ojson doc = state_json(ec.state, 0);
    doc.erase("index");
    doc["lambda"] = lambda;
    doc["eta_l6"] = ec.eta_l6;
    doc["iterations"] = ec.iterations;
    doc["classification"] = (cls.kind == StabilityKind::Stable) ? "stable" : "unstable";
    doc["n_unstable"] = cls.n_unstable;
    doc["near_degenerate"] = cls.near_degenerate;
    write_json(out / "excited.json", doc);
    write_profile_csv(out / "excited.csv", ec.state.phi);
}

}  // namespace

int run_experiment(const RunConfig& cfg, const std::string& out_dir, int jobs) {
    const fs::path out(out_dir);
    fs::create_directories(out);

    ojson manifest;
    manifest["tool"] = "critwave";
    manifest["version"] = kVersion;
    manifest["experiment"] = cfg.experiment;
    manifest["seed"] = cfg.seed;
    manifest["config"] = cfg.raw;
    write_json(out / "manifest.json", manifest);

    if (cfg.experiment == "steady")
        run_steady(cfg, out, jobs);
    else if (cfg.experiment == "spectrum")
        run_spectrum(cfg, out, jobs);
    else if (cfg.experiment == "evolve")
        run_evolve(cfg, out, jobs);
    else if (cfg.experiment == "channel")
        run_channel(cfg, out, jobs);
    else if (cfg.experiment == "resolve")
        run_resolve(cfg, out, jobs);
    else if (cfg.experiment == "threshold")
        run_threshold(cfg, out, jobs);
    else if (cfg.experiment == "excited-construct")
        run_excited(cfg, out);
    else
        throw std::invalid_argument("unknown experiment " + cfg.experiment);
    return 0;
}

}  // namespace critwave
