// Command-line entry point: one subcommand per experiment, JSON config in,
// JSON/CSV artifacts out.  Exit codes: 0 success, 2 invalid config,
// 3 numerical failure.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "critwave/errors.hpp"
#include "critwave/runconfig.hpp"
#include "critwave/version.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    int jobs = 1;
    std::int64_t seed = -1;  // -1: keep the config's seed
};

int run_with(const CommonArgs& args, const std::string& expected_experiment) {
    try {
        critwave::RunConfig cfg = critwave::parse_config_file(args.config_path);
        if (cfg.experiment != expected_experiment) {
            std::cerr << "config experiment \"" << cfg.experiment << "\" does not match subcommand \""
                      << expected_experiment << "\"\n";
            return 2;
        }
        if (args.seed >= 0) {
            cfg.seed = static_cast<std::uint64_t>(args.seed);
            cfg.raw["seed"] = cfg.seed;
        }
        std::string out = args.out_dir;
        if (out.empty()) {
            out = cfg.raw.contains("output_dir") ? cfg.raw.at("output_dir").get<std::string>()
                                                 : std::string(".");
        }
        return critwave::run_experiment(cfg, out, args.jobs);
    } catch (const critwave::numerical_error& e) {
        nlohmann::ordered_json diag;
        diag["error"] = "numerical";
        diag["what"] = e.what();
        std::cerr << diag.dump(2) << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"critwave: radial energy-critical wave equation laboratory"};
    app.set_version_flag("--version", std::string("critwave ") + critwave::kVersion);
    app.require_subcommand(1);

    CommonArgs args;
    const char* names[] = {"steady",  "spectrum",  "evolve",          "channel",
                           "resolve", "threshold", "excited-construct"};
    for (const char* name : names) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", args.config_path, "JSON config file")->required();
        sub->add_option("--out", args.out_dir, "output directory (default: config output_dir)");
        sub->add_option("--jobs", args.jobs, "parallel workers for parameter scans");
        sub->add_option("--seed", args.seed, "override the config seed");
    }

    CLI11_PARSE(app, argc, argv);
    return run_with(args, app.get_subcommands().front()->get_name());
}
