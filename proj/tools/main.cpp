#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "vadp/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"abstraction laboratory for history-based environments"};
    app.require_subcommand(1);

    double eps = 0.1;
    double gamma = 0.5;
    int actions = 2;
    std::string out_dir;
    auto* bounds = app.add_subcommand("bounds", "print closed-form state-count bounds");
    bounds->add_option("--eps", eps, "optimality-gap target")->required();
    bounds->add_option("--gamma", gamma, "discount factor")->required();
    bounds->add_option("--actions", actions, "action count")->required();
    bounds->add_option("--out", out_dir, "also write bounds.csv into this directory");

    std::string run_config;
    auto* run = app.add_subcommand("run", "run one experiment from a JSON config");
    run->add_option("--config", run_config, "JSON config path")->required();

    std::string sweep_config;
    auto* sweep = app.add_subcommand("sweep", "run a parameter grid from a JSON config");
    sweep->add_option("--config", sweep_config, "JSON config path")->required();

    std::string suite = "default";
    std::string verify_out = "out";
    int budget = 0;
    std::uint64_t seed = 1;
    auto* verify = app.add_subcommand("verify", "certify every claim on a suite");
    verify->add_option("--suite", suite, "quick | default | adversarial");
    verify->add_option("--out", verify_out, "output directory");
    verify->add_option("--budget", budget, "adversarial search evaluation budget");
    verify->add_option("--seed", seed, "base RNG seed");

    app.add_subcommand("list-envs", "list the available instances");

    CLI11_PARSE(app, argc, argv);

    try {
        if (bounds->parsed())
            return vadp::cli::cmd_bounds(eps, gamma, actions, out_dir, std::cout);
        if (run->parsed())
            return vadp::cli::cmd_run(vadp::cli::parse_run_config(run_config), std::cout);
        if (sweep->parsed())
            return vadp::cli::cmd_sweep(vadp::cli::parse_sweep_config(sweep_config),
                                        std::cout);
        if (verify->parsed())
            return vadp::cli::cmd_verify(suite, verify_out, budget, seed, std::cout);
        return vadp::cli::cmd_list_envs(std::cout);
    } catch (const vadp::cli::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return vadp::cli::kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return vadp::cli::kExitViolation;
    }
}
