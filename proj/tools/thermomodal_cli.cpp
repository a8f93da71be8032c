#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Core>

#include "thermomodal/thermomodal.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_numeric = 1;
constexpr int exit_config = 2;

struct CommonArgs {
    std::string config_path;
    std::string out_override;
    std::vector<std::string> methods_override;
    bool fixed_step = false;
    int threads = 0;
};

thermomodal::ScenarioConfig load_with_overrides(const CommonArgs& args, std::string* dump) {
    using namespace thermomodal;
    std::ifstream in(args.config_path);
    if (!in) throw ConfigError("config: cannot open '" + args.config_path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config: parse error in '" + args.config_path + "': " + e.what());
    }
    if (dump) *dump = j.dump();
    ScenarioConfig cfg = parse_scenario(j);
    if (!args.out_override.empty()) cfg.output.directory = args.out_override;
    if (!args.methods_override.empty()) {
        cfg.methods.clear();
        for (const auto& m : args.methods_override)
            cfg.methods.push_back(thermomodal::detail::parse_method(m));
    }
    if (args.fixed_step) cfg.integrator.fixed_step = true;
    return cfg;
}

void apply_threads(int threads) {
    if (threads > 0) Eigen::setNbThreads(threads);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coupled thermoelastic vibration: assembly, model reduction, analysis"};
    app.require_subcommand(1);

    CommonArgs args;

    auto add_common = [&](CLI::App* cmd, bool with_run_flags) {
        cmd->add_option("--config", args.config_path, "Scenario config (JSON)")->required();
        cmd->add_option("--out", args.out_override, "Output directory override");
        if (with_run_flags) {
            cmd->add_option("--methods", args.methods_override,
                            "Reduction methods to run (uncoupled, two_step, superposition)")
                ->delimiter(',');
            cmd->add_flag("--fixed-step", args.fixed_step,
                          "Use the fixed-step RK4 integrator (bitwise-reproducible output)");
        }
        cmd->add_option("--threads", args.threads, "Linear algebra thread count");
    };

    CLI::App* cmd_run = app.add_subcommand("run", "Execute the full scenario pipeline");
    add_common(cmd_run, true);
    CLI::App* cmd_validate = app.add_subcommand("validate", "Static scenario validation");
    add_common(cmd_validate, false);
    CLI::App* cmd_assemble =
        app.add_subcommand("assemble", "Assemble and export the global blocks only");
    add_common(cmd_assemble, false);
    CLI::App* cmd_eig = app.add_subcommand("eig", "Full coupled eigenvalue spectrum only");
    add_common(cmd_eig, false);

    CLI11_PARSE(app, argc, argv);
    apply_threads(args.threads);

    using namespace thermomodal;
    try {
        if (app.got_subcommand(cmd_validate)) {
            ScenarioConfig cfg = load_with_overrides(args, nullptr);
            int ns = 0, nt = 0;
            const auto diags = validate_scenario(cfg, &ns, &nt);
            if (diags.empty()) {
                std::printf("ok: scenario '%s' resolves to N_s=%d, N_T=%d\n", cfg.name.c_str(),
                            ns, nt);
                return exit_ok;
            }
            for (const auto& d : diags) std::printf("diagnostic: %s\n", d.c_str());
            return exit_config;
        }

        std::string dump;
        ScenarioConfig cfg = load_with_overrides(args, &dump);
        {
            const auto diags = validate_scenario(cfg);
            if (!diags.empty()) {
                for (const auto& d : diags) std::fprintf(stderr, "config error: %s\n", d.c_str());
                return exit_config;
            }
        }

        if (app.got_subcommand(cmd_assemble)) {
            export_assembled_blocks(cfg, cfg.output.directory);
            std::printf("wrote global blocks to %s\n", cfg.output.directory.c_str());
            return exit_ok;
        }
        if (app.got_subcommand(cmd_eig)) {
            export_eigenvalues(cfg, cfg.output.directory);
            std::printf("wrote eigenvalues.csv to %s\n", cfg.output.directory.c_str());
            return exit_ok;
        }

        const RunSummary summary = run_scenario(cfg, dump);
        std::printf("scenario '%s': N_s=%d N_T=%d, outputs in %s\n", cfg.name.c_str(),
                    summary.n_struct, summary.n_thermal, cfg.output.directory.c_str());
        for (const auto& ms : summary.methods)
            std::printf("  %-13s construction %.3fs  thermal err max %.3e mean %.3e\n",
                        method_name(ms.method), ms.construction_seconds, ms.errors.max_thermal,
                        ms.errors.mean_thermal);
        return exit_ok;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return exit_config;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_numeric;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_numeric;
    }
}
