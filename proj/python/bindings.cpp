// pybind11 surface for the main operations.  Fields cross the boundary as
// numpy arrays; everything heavier stays in C++.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "critwave/diagnostics.hpp"
#include "critwave/errors.hpp"
#include "critwave/evolve.hpp"
#include "critwave/grid.hpp"
#include "critwave/manifold.hpp"
#include "critwave/potential.hpp"
#include "critwave/runconfig.hpp"
#include "critwave/spectrum.hpp"
#include "critwave/steady.hpp"
#include "critwave/version.hpp"

namespace py = pybind11;
using namespace critwave;

namespace {

py::array_t<double> to_numpy(const std::vector<double>& v) {
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

RadialField field_from_numpy(const GridPtr& g, py::array_t<double, py::array::c_style> a) {
    if (a.ndim() != 1 || a.shape(0) != g->nodes())
        throw std::invalid_argument("array must be 1-D with n+1 entries");
    std::vector<double> vals(a.data(), a.data() + a.shape(0));
    return RadialField(g, std::move(vals));
}

py::list matrix_to_numpy(const std::vector<std::vector<double>>& rows) {
    py::list out;
    for (const auto& r : rows) out.append(to_numpy(r));
    return out;
}

}  // namespace

PYBIND11_MODULE(critwave, m) {
    m.doc() = "Radial defocusing energy-critical wave equation laboratory";
    m.attr("__version__") = kVersion;

    py::register_exception<numerical_error>(m, "NumericalError");

    py::class_<Grid, std::shared_ptr<Grid>>(m, "Grid")
        .def(py::init([](int n, double r_max) { return std::make_shared<Grid>(n, r_max); }),
             py::arg("n"), py::arg("r_max"))
        .def_property_readonly("n", &Grid::n)
        .def_property_readonly("r_max", &Grid::r_max)
        .def_property_readonly("dr", &Grid::dr)
        .def_property_readonly("r",
                               [](const Grid& g) {
                                   return to_numpy(std::vector<double>(g.r().begin(), g.r().end()));
                               })
        .def("__repr__", [](const Grid& g) {
            return "Grid(n=" + std::to_string(g.n()) + ", r_max=" + std::to_string(g.r_max()) + ")";
        });

    py::class_<RadialField>(m, "RadialField")
        .def(py::init(&field_from_numpy), py::arg("grid"), py::arg("values"))
        .def_property_readonly("grid", [](const RadialField& f) { return f.grid; })
        .def_property_readonly("values", [](const RadialField& f) { return to_numpy(f.u); });

    py::class_<RadialPair>(m, "RadialPair")
        .def(py::init([](const RadialField& u, const RadialField& ut) {
                 RadialPair p{u, ut};
                 require_valid(p);
                 return p;
             }),
             py::arg("u"), py::arg("ut"))
        .def_readonly("u", &RadialPair::u)
        .def_readonly("ut", &RadialPair::ut);

    m.def("zero_field", [](const GridPtr& g) { return RadialField(g); }, py::arg("grid"));
    m.def("zero_pair",
          [](const GridPtr& g) { return RadialPair{RadialField(g), RadialField(g)}; },
          py::arg("grid"));

    // grid operations
    m.def("laplacian_w", &laplacian_w, py::arg("field"));
    m.def("radial_derivative", &radial_derivative, py::arg("field"));
    m.def("h1_seminorm_sq", &h1_seminorm_sq, py::arg("field"));
    m.def("l2_norm_sq", &l2_norm_sq, py::arg("field"));
    m.def("l6_norm", &l6_norm, py::arg("field"));
    m.def("annulus_energy", &annulus_energy, py::arg("pair"), py::arg("rho_in"), py::arg("rho_out"));
    m.def("pair_norm_h1l2", &pair_norm_h1l2, py::arg("pair"));
    m.def("local_pair_dist", &local_pair_dist, py::arg("pair"), py::arg("phi"), py::arg("A"));

    // potentials
    py::class_<Potential>(m, "Potential")
        .def_readonly("values", &Potential::values)
        .def_readonly("beta", &Potential::beta)
        .def_readonly("y_norm", &Potential::y_norm)
        .def_readonly("under_resolved", &Potential::under_resolved);
    m.def("aubin_talenti", &aubin_talenti, py::arg("grid"));
    m.def("aubin_talenti_scaled", &aubin_talenti_scaled, py::arg("grid"), py::arg("lambda_"));
    m.def("rescale_profile", &rescale_profile, py::arg("field"), py::arg("lambda_"));
    m.def("composite_potential", &composite_potential, py::arg("grid"), py::arg("lambda_"));
    m.def("scaled_family", &scaled_family, py::arg("potential"), py::arg("alpha"));
    m.def("gaussian_potential", &gaussian_potential, py::arg("grid"), py::arg("amplitude"),
          py::arg("sigma"));
    m.def("zero_potential", &zero_potential, py::arg("grid"));
    m.def(
        "potential_from_json",
        [](const GridPtr& g, const std::string& text) {
            return potential_from_json(g, nlohmann::json::parse(text));
        },
        py::arg("grid"), py::arg("json_text"));

    // steady states
    py::enum_<ShootOutcome>(m, "ShootOutcome")
        .value("DecaysPositive", ShootOutcome::DecaysPositive)
        .value("DecaysNegative", ShootOutcome::DecaysNegative)
        .value("BlowsUp", ShootOutcome::BlowsUp)
        .value("Indeterminate", ShootOutcome::Indeterminate);
    py::class_<ShootResult>(m, "ShootResult")
        .def_readonly("trajectory", &ShootResult::trajectory)
        .def_readonly("outcome", &ShootResult::outcome)
        .def_readonly("sign_changes", &ShootResult::sign_changes)
        .def_readonly("final_sign", &ShootResult::final_sign)
        .def_readonly("r_exit", &ShootResult::r_exit)
        .def_readonly("diagnostic", &ShootResult::diagnostic);
    m.def(
        "shoot", [](const Potential& v, double a) { return shoot(v, a); }, py::arg("potential"),
        py::arg("a"));

    py::class_<SteadyState>(m, "SteadyState")
        .def_readonly("phi", &SteadyState::phi)
        .def_readonly("sign_changes", &SteadyState::sign_changes)
        .def_readonly("energy_J", &SteadyState::energy_J)
        .def_readonly("residual", &SteadyState::residual)
        .def_readonly("decay_const", &SteadyState::decay_const)
        .def_readonly("shoot_param", &SteadyState::shoot_param)
        .def_readonly("under_resolved", &SteadyState::under_resolved);
    m.def(
        "find_steady_states",
        [](const Potential& v, double a_min, double a_max, int n_scan, int jobs) {
            SteadyOptions opt;
            opt.jobs = jobs;
            return find_steady_states(v, a_min, a_max, n_scan, opt);
        },
        py::arg("potential"), py::arg("a_min"), py::arg("a_max"), py::arg("n_scan"),
        py::arg("jobs") = 1);
    m.def("energy_J", &energy_J, py::arg("phi"), py::arg("potential"));
    m.def("steady_residual", &steady_residual, py::arg("phi"), py::arg("potential"));
    m.def(
        "newton_refine",
        [](const RadialField& phi, const Potential& v) -> py::object {
            auto res = newton_refine(phi, v);
            if (!res) return py::none();
            return py::cast(*res);
        },
        py::arg("phi"), py::arg("potential"));
    py::class_<ExcitedConstruction>(m, "ExcitedConstruction")
        .def_readonly("state", &ExcitedConstruction::state)
        .def_readonly("eta_l6", &ExcitedConstruction::eta_l6)
        .def_readonly("iterations", &ExcitedConstruction::iterations);
    m.def("construct_stable_excited", &construct_stable_excited, py::arg("grid"),
          py::arg("lambda_"), py::arg("eps_target") = 0.5);
    py::class_<DecayCheckResult>(m, "DecayCheckResult")
        .def_readonly("decay_const", &DecayCheckResult::decay_const)
        .def_readonly("pass_", &DecayCheckResult::pass);
    m.def("decay_check", &decay_check, py::arg("state"));

    // spectrum
    py::class_<Tridiagonal>(m, "Tridiagonal")
        .def_property_readonly("diag", [](const Tridiagonal& t) { return to_numpy(t.diag); })
        .def_property_readonly("off", [](const Tridiagonal& t) { return to_numpy(t.off); });
    m.def("assemble_linearized", &assemble_linearized, py::arg("potential"), py::arg("phi"));
    m.def("assemble_schroedinger", &assemble_schroedinger, py::arg("potential"));
    m.def("sturm_count_below", &sturm_count_below, py::arg("matrix"), py::arg("x"));
    m.def("kth_eigenvalue", &kth_eigenvalue, py::arg("matrix"), py::arg("k"),
          py::arg("abs_tol") = 1e-12);
    py::class_<EigenPair>(m, "EigenPair")
        .def_readonly("eigenvalue", &EigenPair::eigenvalue)
        .def_readonly("k", &EigenPair::k)
        .def_readonly("rho", &EigenPair::rho)
        .def_readonly("residual", &EigenPair::residual);
    py::class_<SpectralData>(m, "SpectralData")
        .def_readonly("n_neg", &SpectralData::n_neg)
        .def_readonly("eigs", &SpectralData::eigs)
        .def_readonly("gap", &SpectralData::gap);
    m.def("negative_eigenpairs", &negative_eigenpairs, py::arg("matrix"), py::arg("grid"));
    py::enum_<StabilityKind>(m, "StabilityKind")
        .value("Stable", StabilityKind::Stable)
        .value("Unstable", StabilityKind::Unstable);
    py::class_<Classification>(m, "Classification")
        .def_readonly("kind", &Classification::kind)
        .def_readonly("n_unstable", &Classification::n_unstable)
        .def_readonly("near_degenerate", &Classification::near_degenerate);
    m.def("classify", &classify, py::arg("potential"), py::arg("phi"), py::arg("gap_tol") = 1e-6);
    m.def("unstable_coefficient", &unstable_coefficient, py::arg("pair"), py::arg("phi"),
          py::arg("spec"), py::arg("j"));
    m.def("oscillation_count", &oscillation_count, py::arg("potential"), py::arg("phi"));

    // evolution
    py::enum_<Boundary>(m, "Boundary")
        .value("Outgoing", Boundary::Outgoing)
        .value("ReflectingGuard", Boundary::ReflectingGuard);
    py::class_<EvolveConfig>(m, "EvolveConfig")
        .def(py::init<>())
        .def_readwrite("dt", &EvolveConfig::dt)
        .def_readwrite("t_end", &EvolveConfig::t_end)
        .def_readwrite("cfl", &EvolveConfig::cfl)
        .def_readwrite("boundary", &EvolveConfig::boundary)
        .def_readwrite("snapshot_stride", &EvolveConfig::snapshot_stride)
        .def_readwrite("sample_dt", &EvolveConfig::sample_dt)
        .def_readwrite("local_radius", &EvolveConfig::local_radius)
        .def_readwrite("ext_offsets", &EvolveConfig::ext_offsets)
        .def_readwrite("nonlinear", &EvolveConfig::nonlinear)
        .def_readwrite("drift_tol", &EvolveConfig::drift_tol);
    py::class_<EvolutionTrace>(m, "EvolutionTrace")
        .def_property_readonly("times", [](const EvolutionTrace& t) { return to_numpy(t.times); })
        .def_property_readonly("energy", [](const EvolutionTrace& t) { return to_numpy(t.energy); })
        .def_property_readonly("local_energy",
                               [](const EvolutionTrace& t) { return to_numpy(t.local_energy); })
        .def_property_readonly(
            "exterior_energy",
            [](const EvolutionTrace& t) { return matrix_to_numpy(t.exterior_energy); })
        .def_property_readonly("local_dists",
                               [](const EvolutionTrace& t) { return matrix_to_numpy(t.local_dists); })
        .def_property_readonly("mode_coeffs",
                               [](const EvolutionTrace& t) { return matrix_to_numpy(t.mode_coeffs); })
        .def_property_readonly("l6_diffs",
                               [](const EvolutionTrace& t) { return matrix_to_numpy(t.l6_diffs); })
        .def_property_readonly(
            "strichartz_surrogate",
            [](const EvolutionTrace& t) { return to_numpy(t.strichartz_surrogate); })
        .def_readonly("first_contact_time", &EvolutionTrace::first_contact_time)
        .def_readonly("drift_exceeded", &EvolutionTrace::drift_exceeded)
        .def_readonly("final_state", &EvolutionTrace::final_state);
    m.def("step", &step, py::arg("state"), py::arg("potential"), py::arg("dt"),
          py::arg("boundary") = Boundary::ReflectingGuard, py::arg("nonlinear") = true);
    m.def("energy", &energy, py::arg("state"), py::arg("potential"));
    m.def(
        "evolve",
        [](const RadialPair& data, const Potential& v, const EvolveConfig& cfg,
           const std::vector<SteadyState>& refs, const SpectralData* spec, int primary_ref) {
            return evolve(data, v, cfg, refs, spec, primary_ref);
        },
        py::arg("data"), py::arg("potential"), py::arg("config"),
        py::arg("references") = std::vector<SteadyState>{}, py::arg("spec") = nullptr,
        py::arg("primary_ref") = 0);

    // diagnostics
    py::enum_<ChannelDirection>(m, "ChannelDirection")
        .value("Forward", ChannelDirection::Forward)
        .value("Backward", ChannelDirection::Backward);
    py::class_<ChannelReport>(m, "ChannelReport")
        .def_readonly("R", &ChannelReport::R)
        .def_readonly("direction", &ChannelReport::direction)
        .def_readonly("min_ext_energy", &ChannelReport::min_ext_energy)
        .def_property_readonly("times_sampled",
                               [](const ChannelReport& r) { return to_numpy(r.times_sampled); })
        .def_property_readonly("ext_energies",
                               [](const ChannelReport& r) { return to_numpy(r.ext_energies); });
    m.def(
        "channel_scan",
        [](const RadialPair& data, const Potential& v, double R, double t_end) {
            return channel_scan(data, v, R, t_end);
        },
        py::arg("data"), py::arg("potential"), py::arg("R"), py::arg("t_end"));
    m.def(
        "quantitative_channel",
        [](const RadialPair& data, const Potential& v, double t_end) {
            return quantitative_channel(data, v, t_end);
        },
        py::arg("data"), py::arg("potential"), py::arg("t_end"));
    m.def("distance_to_catalog", &distance_to_catalog, py::arg("data"), py::arg("catalog"));
    py::class_<ResolutionReport>(m, "ResolutionReport")
        .def_property_readonly("winner",
                               [](const ResolutionReport& r) -> py::object {
                                   if (!r.winner) return py::none();
                                   return py::int_(*r.winner);
                               })
        .def_readonly("trailing_dist", &ResolutionReport::trailing_dist)
        .def_readonly("radiated_energy", &ResolutionReport::radiated_energy)
        .def_readonly("window_start", &ResolutionReport::window_start)
        .def_readonly("window_end", &ResolutionReport::window_end);
    m.def("detect_resolution", &detect_resolution, py::arg("trace"), py::arg("eps_scatter"),
          py::arg("tau"));
    m.def("l6_decay", &l6_decay, py::arg("trace"), py::arg("ref_index"), py::arg("eps"));

    // manifold exploration
    py::class_<DataFamily>(m, "DataFamily")
        .def(py::init([](const RadialPair& base, const std::vector<RadialPair>& dirs) {
                 DataFamily f{base, dirs};
                 f.validate();
                 return f;
             }),
             py::arg("base"), py::arg("directions"))
        .def("at", [](const DataFamily& f, double s) { return f.at(s); }, py::arg("s"))
        .def("gram_det", &DataFamily::gram_det);
    py::class_<ThresholdOptions>(m, "ThresholdOptions")
        .def(py::init<>())
        .def_readwrite("eps_scatter", &ThresholdOptions::eps_scatter)
        .def_readwrite("tau", &ThresholdOptions::tau)
        .def_readwrite("max_extend", &ThresholdOptions::max_extend)
        .def_readwrite("eps_residence", &ThresholdOptions::eps_residence)
        .def_readwrite("phi_u_index", &ThresholdOptions::phi_u_index)
        .def_readwrite("max_probes", &ThresholdOptions::max_probes);
    py::class_<ThresholdResult>(m, "ThresholdResult")
        .def_readonly("s_lo", &ThresholdResult::s_lo)
        .def_readonly("s_hi", &ThresholdResult::s_hi)
        .def_property_readonly("winner_lo",
                               [](const ThresholdResult& r) -> py::object {
                                   if (!r.winner_lo) return py::none();
                                   return py::int_(*r.winner_lo);
                               })
        .def_property_readonly("winner_hi",
                               [](const ThresholdResult& r) -> py::object {
                                   if (!r.winner_hi) return py::none();
                                   return py::int_(*r.winner_hi);
                               })
        .def_readonly("width", &ThresholdResult::width)
        .def_readonly("residence_time", &ThresholdResult::residence_time)
        .def_readonly("residence_samples", &ThresholdResult::residence_samples)
        .def_readonly("probes", &ThresholdResult::probes)
        .def_readonly("flagged_ambiguous", &ThresholdResult::flagged_ambiguous);
    m.def("bisect_threshold", &bisect_threshold, py::arg("family"), py::arg("potential"),
          py::arg("config"), py::arg("catalog"), py::arg("s_lo"), py::arg("s_hi"),
          py::arg("tol_s"), py::arg("options") = ThresholdOptions{});
    m.def("unstable_manifold_trajectory", &unstable_manifold_trajectory, py::arg("phi_u"),
          py::arg("spec"), py::arg("s_small"), py::arg("potential"), py::arg("config"),
          py::arg("catalog"), py::arg("phi_u_index"));
    py::class_<ExtraRadiationResult>(m, "ExtraRadiationResult")
        .def_readonly("e_ext_on", &ExtraRadiationResult::e_ext_on)
        .def_readonly("e_ext_off", &ExtraRadiationResult::e_ext_off)
        .def_property_readonly("delta_obs",
                               [](const ExtraRadiationResult& r) -> py::object {
                                   if (!r.delta_obs) return py::none();
                                   return py::float_(*r.delta_obs);
                               })
        .def_readonly("resolved_on", &ExtraRadiationResult::resolved_on)
        .def_readonly("resolved_off", &ExtraRadiationResult::resolved_off);
    m.def("extra_radiation_experiment", &extra_radiation_experiment, py::arg("on_data"),
          py::arg("off_data"), py::arg("phi_u"), py::arg("potential"), py::arg("config"),
          py::arg("catalog"), py::arg("L"), py::arg("eps_scatter") = 1e-2, py::arg("tau") = 20.0);

    // experiment runner (same code path as the CLI)
    m.def(
        "run_experiment",
        [](const std::string& config_json, const std::string& out_dir, int jobs) {
            return run_experiment(parse_config(nlohmann::ordered_json::parse(config_json)), out_dir,
                                  jobs);
        },
        py::arg("config_json"), py::arg("out_dir"), py::arg("jobs") = 1);
}
