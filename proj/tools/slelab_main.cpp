// slelab command line: config-driven experiment runner.
//
//   slelab run <config.json> [--output-dir DIR] [--seed-override S] [--threads N]
//   slelab validate <config.json>
//
// Exit codes: 0 success, 2 config error, 3 numeric failure, 4 budget truncation.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "slelab/experiment.hpp"
#include "slelab/types.hpp"
#include "slelab/version.hpp"

int main(int argc, char** argv) {
    CLI::App app{"slelab: SLE traces, conformal maps, boundary sieves and spectra"};
    app.set_version_flag("--version", slelab::kVersion);
    app.require_subcommand(1);

    std::string config_path;
    std::string output_dir;
    std::uint64_t seed_override = 0;
    bool have_seed_override = false;
    std::size_t threads = 0;

    CLI::App* run_cmd = app.add_subcommand("run", "run an experiment config");
    run_cmd->add_option("config", config_path, "experiment config JSON")->required();
    run_cmd->add_option("--output-dir", output_dir, "override the config's output directory");
    run_cmd->add_option("--seed-override", seed_override, "override the config's seed")
        ->each([&](const std::string&) { have_seed_override = true; });
    run_cmd->add_option("--threads", threads, "worker threads (0 = all cores)");

    CLI::App* validate_cmd = app.add_subcommand("validate", "check a config without running");
    validate_cmd->add_option("config", config_path, "experiment config JSON")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        const slelab::ExperimentConfig cfg = slelab::ExperimentConfig::load(config_path);

        if (validate_cmd->parsed()) {
            const auto diags = slelab::validate(cfg);
            bool any_error = false;
            for (const auto& d : diags) {
                std::cout << (d.is_error ? "violation: " : "warning: ") << d.message << "\n";
                any_error |= d.is_error;
            }
            if (!any_error) std::cout << "config ok: kind=" << cfg.kind << "\n";
            return any_error ? 2 : 0;
        }

        slelab::RunOverrides overrides;
        if (!output_dir.empty()) overrides.output_dir = output_dir;
        if (have_seed_override) overrides.seed = seed_override;
        overrides.threads = threads;

        const slelab::RunManifest manifest = slelab::run(cfg, overrides);
        std::cout << "wrote " << manifest.manifest_path.string() << " ("
                  << manifest.outputs.size() << " outputs, "
                  << manifest.wall_seconds << " s)\n";
        if (manifest.truncated) {
            std::cout << "budget exhausted: results truncated\n";
            return 4;
        }
        return 0;
    } catch (const slelab::ParameterError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const slelab::DomainError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const slelab::GeometryError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const slelab::NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const slelab::ResourceError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
