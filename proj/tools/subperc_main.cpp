// subperc — percolation experiments on sub-Poisson point patterns.
//
// Usage: subperc <experiment> --config <path> [--seed <u64>] [--out <dir>] [--jobs <n>]
//
// Exit codes: 0 success, 2 configuration error, 3 precondition or bracketing
// failure, 4 I/O error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "subperc/errors.hpp"
#include "subperc/experiments.hpp"
#include "subperc/version.hpp"

namespace {

struct CliOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<int> jobs;
};

int run(const std::string& experiment, const CliOptions& opt) {
    using namespace subperc;
    ExperimentConfig ec = ExperimentConfig::from_file(opt.config_path);
    if (ec.experiment != experiment)
        throw ConfigError("config declares experiment '" + ec.experiment + "' but the subcommand is '" +
                          experiment + "'");
    if (opt.seed) ec.master_seed = *opt.seed;
    if (opt.out) ec.out_dir = *opt.out;
    if (opt.jobs) ec.jobs = *opt.jobs;
    run_experiment(ec);
    std::cout << "wrote " << (ec.out_dir / "manifest.json").string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"percolation experiments on sub-Poisson point patterns"};
    app.set_version_flag("--version", std::string("subperc ") + subperc::kVersion);
    app.require_subcommand(1);

    CliOptions opt;
    std::string chosen;
    for (const std::string& name : subperc::experiment_names()) {
        CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment");
        sub->add_option("--config", opt.config_path, "experiment config file (key=value lines)")
            ->required();
        sub->add_option_function<std::uint64_t>(
            "--seed", [&opt](const std::uint64_t& v) { opt.seed = v; }, "override master_seed");
        sub->add_option_function<std::string>(
            "--out", [&opt](const std::string& v) { opt.out = v; }, "override output directory");
        sub->add_option_function<int>(
            "--jobs", [&opt](const int& v) { opt.jobs = v; }, "worker threads (0 = hardware)");
        sub->callback([&chosen, name]() { chosen = name; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        return run(chosen, opt);
    } catch (const subperc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const subperc::BracketingError& e) {
        std::cerr << "bracketing failure: " << e.what() << "\n";
        return 3;
    } catch (const subperc::PreconditionError& e) {
        std::cerr << "precondition failure: " << e.what() << "\n";
        return 3;
    } catch (const subperc::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
