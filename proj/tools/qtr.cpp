// qtr: command-line front end for the trapped-ion tunneling-rotor simulator.
//
//   qtr <modes|potential|tunnel|walk|interfere|adiabat> [--config FILE] [--out DIR]
//       [--format csv|svg|both] [--seed chain|ring-up|ring-down] [--with-wavefunctions]
//
// Exit codes: 0 success, 1 numerical failure, 2 usage or configuration error.

#include <iostream>

#include <CLI11.hpp>

#include "qtr/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Trapped-ion quantum tunneling rotor simulator"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", format = "csv", seed;
    bool with_wavefunctions = false;
    for (const auto& name : qtr::cli::command_names()) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("-c,--config", config_path, "INI configuration file");
        sub->add_option("-o,--out", out_dir, "output directory");
        sub->add_option("-f,--format", format, "csv, svg or both");
        if (name == "modes") sub->add_option("--seed", seed, "initial equilibrium seed");
        if (name == "potential")
            sub->add_flag("--with-wavefunctions", with_wavefunctions, "add psi_up / psi_down columns");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        qtr::RunConfig config = config_path.empty() ? qtr::RunConfig{} : qtr::load_run_config(config_path);
        if (!seed.empty()) config.modes.seed = qtr::parse_seed(seed);
        if (with_wavefunctions) config.potential.with_wavefunctions = true;
        config.validate();
        qtr::cli::OutputOptions out{out_dir, qtr::cli::parse_format(format)};
        const std::string name = app.get_subcommands().front()->get_name();
        const auto result = qtr::cli::run_command(name, config, out);
        std::cout << result.summary;
        for (const auto& f : result.files) std::cout << "wrote " << f.string() << "\n";
        return 0;
    } catch (const qtr::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const qtr::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
