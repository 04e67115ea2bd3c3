#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "lab/config.hpp"
#include "lab/fixtures.hpp"
#include "lab/run.hpp"
#include "multavg/version.hpp"

int main(int argc, char** argv) {
    using namespace multavg::lab;

    CLI::App app{"Numerical experiments on multilinear averages of multiplicative functions"};
    app.set_version_flag("--version", std::string(multavg::kVersion));
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    unsigned threads = 0;
    std::uint64_t seed = 0;
    bool print_config = false;

    for (std::string_view kind : kKinds) {
        auto* sub = app.add_subcommand(std::string(kind), std::string(kind) + " experiment");
        sub->add_option("--config", config_path, "experiment configuration file")->required();
        sub->add_option("--out", out_path, "output CSV (overrides the config)");
        sub->add_option("--threads", threads, "worker threads (overrides the config)");
        sub->add_option("--seed", seed, "seed for random fixtures (overrides the config)");
        sub->add_flag("--print-config", print_config, "print the canonical configuration and exit");
    }
    auto* fixtures = app.add_subcommand("fixtures", "list builtin functions, systems and recipes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    if (fixtures->parsed()) {
        std::cout << list_fixtures();
        return kExitOk;
    }

    CLI::App* sub = app.get_subcommands().front();
    ExperimentConfig config;
    try {
        config = load_config(config_path);
    } catch (...) {
        return exit_code_for_current_exception(std::cerr);
    }
    config.kind = sub->get_name();
    if (sub->count("--out")) config.output = out_path;
    if (sub->count("--threads")) config.threads = threads;
    if (sub->count("--seed")) config.seed = seed;

    if (print_config) {
        std::cout << serialize_config(config);
        return kExitOk;
    }
    return run(config, std::cout, std::cerr);
}
