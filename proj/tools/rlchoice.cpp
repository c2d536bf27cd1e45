#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "rlchoice/experiments.hpp"

int main(int argc, char** argv) {
    using namespace rlchoice;

    CLI::App app{"Reinforcement-learning discrete choice: experiments and solvers"};
    app.require_subcommand(1);

    ExperimentConfig cfg;
    auto* run = app.add_subcommand("run", "Run one experiment");
    run->add_option("experiment", cfg.experiment, "Experiment id")
        ->required()
        ->check(CLI::IsMember(experiment_ids()));
    run->add_option("--beta", cfg.beta, "Softmax temperature (Phi(v) = e^{v/beta})");
    run->add_option("--alpha", cfg.alpha, "Response scale for the full insurance model");
    run->add_option("--rho", cfg.rho, "Limit-principle sharpness");
    run->add_option("--mix", cfg.mix_weight, "Common-consequence mixing weight");
    run->add_option("--loss", cfg.loss, "Insurance loss size");
    run->add_option("--reference", cfg.reference, "Reference point for the framed log utility");
    run->add_option("--seed", cfg.seed, "Simulation seed");
    run->add_option("--steps", cfg.steps, "Simulation steps");
    run->add_option("--burn-in", cfg.burn_in, "Simulation burn-in steps");
    run->add_option("--grid", cfg.grid, "Grid points per axis");
    run->add_option("--menu", cfg.menu, "Coverage menu: step size or comma-separated levels");
    run->add_option("--spec", cfg.spec, "Model spec JSON (file path or inline)");
    run->add_option("--x", cfg.x, "Lottery JSON (file path or inline)");
    run->add_option("--y", cfg.y, "Second lottery JSON");
    run->add_option("--chain", cfg.chain, "Stationary solver: extended, paper or closed-form")
        ->check(CLI::IsMember({"extended", "paper", "closed-form"}));
    run->add_option("--out", cfg.out, "Output directory (default: stdout)");

    const std::map<std::string, LossProbConvention> conventions = {
        {"table1", LossProbConvention::table1}, {"natural", LossProbConvention::natural}};
    const std::map<std::string, LimitConstant> constants = {
        {"paper", LimitConstant::paper}, {"q-dependent", LimitConstant::q_dependent}};
    const std::map<std::string, OutputFormat> formats = {
        {"csv", OutputFormat::csv}, {"json", OutputFormat::json}};
    run->add_option("--loss-prob-convention", cfg.convention, "Insurance loss probability convention")
        ->transform(CLI::CheckedTransformer(conventions));
    run->add_option("--limit-constant", cfg.limit_constant, "Limit-principle constant")
        ->transform(CLI::CheckedTransformer(constants));
    run->add_option("--format", cfg.format, "Output format")
        ->transform(CLI::CheckedTransformer(formats));

    app.add_subcommand("list", "List experiment ids")->callback([] {
        for (const auto& id : experiment_ids()) std::cout << id << "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }
    if (run->parsed()) return run_experiment(cfg, std::cout, std::cerr);
    return kExitOk;
}
