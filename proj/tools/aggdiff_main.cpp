#include "aggdiff/config.hpp"
#include "aggdiff/error.hpp"
#include "aggdiff/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"aggdiff: aggregation equation with degenerate diffusion"};
    app.require_subcommand(1);

    std::string run_path;
    auto* run_cmd = app.add_subcommand("run", "run the experiment described by a config file");
    run_cmd->add_option("config", run_path, "configuration document")->required()->check(CLI::ExistingFile);

    std::string check_path;
    auto* check_cmd = app.add_subcommand("check", "replay a config and evaluate bounds only (no files written)");
    check_cmd->add_option("config", check_path, "configuration document")->required()->check(CLI::ExistingFile);

    auto* version_cmd = app.add_subcommand("version", "print the library version");

    CLI11_PARSE(app, argc, argv);

    if (*version_cmd) {
        std::cout << "aggdiff " << aggdiff::version() << '\n';
        return 0;
    }

    const std::string& path = *run_cmd ? run_path : check_path;
    aggdiff::RunConfigFile cfg;
    try {
        cfg = aggdiff::load_config(path);
    } catch (const aggdiff::IoError& e) {
        std::cerr << path << ": " << e.what() << '\n';
        return aggdiff::kExitIoFailure;
    } catch (const aggdiff::Error& e) {
        std::cerr << path << ": " << e.what() << '\n';
        return 1;
    }

    aggdiff::ExperimentOptions options;
    options.write_outputs = static_cast<bool>(*run_cmd);
    options.log = &std::cout;
    const int code = aggdiff::run_experiment(cfg, options);
    std::cout << (*run_cmd ? "run" : "check") << ": exit " << code << '\n';
    return code;
}
