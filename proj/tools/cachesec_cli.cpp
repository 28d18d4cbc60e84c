// cachesec: command-line runner for the secrecy experiments.
//
//   cachesec popularity|sweep-theta|sweep-density|sweep-threshold|validate
//            [--config PATH] [--seed U64] [--trials N] [--window-km R]
//            [--out PATH] [--mc off|decoupled|coupled] [--noise on|off]
//
// Exit codes: 0 success, 1 validation failure, 2 configuration error,
// 3 numeric failure.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "cachesec/experiments/commands.hpp"

namespace ex = cachesec::experiments;

namespace {

struct Flags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<double> window_km;
    std::string out;
    std::optional<std::string> mc;
    std::optional<std::string> noise;
};

void add_common(CLI::App* cmd, Flags& flags)
{
    cmd->add_option("--config", flags.config_path, "INI configuration file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", flags.seed, "master seed for the simulator");
    cmd->add_option("--trials", flags.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
    cmd->add_option("--window-km", flags.window_km, "simulation window radius in km")->check(CLI::PositiveNumber);
    cmd->add_option("--out", flags.out, "CSV output path (default stdout)");
    cmd->add_option("--mc", flags.mc, "Monte Carlo columns")->check(CLI::IsMember({"off", "decoupled", "coupled"}));
    cmd->add_option("--noise", flags.noise, "thermal noise")->check(CLI::IsMember({"on", "off"}));
}

ex::ExperimentConfig effective_config(const Flags& flags)
{
    ex::ExperimentConfig config;
    if (!flags.config_path.empty()) {
        config = ex::load_config(flags.config_path);
    }
    if (flags.seed) {
        config.mc.seed = *flags.seed;
    }
    if (flags.trials) {
        config.mc.trials = *flags.trials;
    }
    if (flags.window_km) {
        config.mc.window_radius_m = *flags.window_km * 1000.0;
    }
    if (flags.mc) {
        config.mc_mode = ex::parse_mc_mode(*flags.mc);
    }
    if (flags.noise) {
        config.set_noise(*flags.noise == "on");
    }
    config.validate();
    return config;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Secrecy metrics of cache-aided cellular networks"};
    app.require_subcommand(1);
    Flags flags;
    auto* popularity = app.add_subcommand("popularity", "Zipf popularity profile and hit probability");
    auto* sweep_theta = app.add_subcommand("sweep-theta", "secure-transmission rate over the power split");
    auto* sweep_density = app.add_subcommand("sweep-density", "secrecy rates over the eavesdropper density ratio");
    auto* sweep_threshold = app.add_subcommand("sweep-threshold", "secrecy coverage over the rate threshold");
    auto* validate = app.add_subcommand("validate", "analytic results against the simulator");
    for (auto* cmd : {popularity, sweep_theta, sweep_density, sweep_threshold, validate}) {
        add_common(cmd, flags);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return ex::exit_config_error;
    }

    try {
        const auto config = effective_config(flags);
        ex::CommandResult result;
        if (popularity->parsed()) {
            result = ex::cmd_popularity(config);
        } else if (sweep_theta->parsed()) {
            result = ex::cmd_sweep_theta(config);
        } else if (sweep_density->parsed()) {
            result = ex::cmd_sweep_density(config);
        } else if (sweep_threshold->parsed()) {
            result = ex::cmd_sweep_threshold(config);
        } else {
            result = ex::cmd_validate(config);
        }
        if (flags.out.empty()) {
            std::cout << result.csv;
            std::cerr << result.report;
        } else {
            std::ofstream out(flags.out, std::ios::binary);
            out << result.csv;
            if (!out) {
                std::cerr << "error: cannot write '" << flags.out << "'\n";
                return ex::exit_config_error;
            }
            std::cout << result.report;
        }
        return result.exit_code;
    } catch (const cachesec::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return ex::exit_config_error;
    } catch (const cachesec::ParameterError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return ex::exit_config_error;
    } catch (const cachesec::NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << " (best estimate " << e.best_estimate() << ", error bound "
                  << e.error_bound() << ")\n";
        return ex::exit_numeric_failure;
    } catch (const cachesec::Error& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return ex::exit_numeric_failure;
    }
}
