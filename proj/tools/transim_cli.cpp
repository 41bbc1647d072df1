#include "transim/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

struct Flags {
    std::string config;
    std::optional<std::string> out, data, network, timetable, demand, beta, choice;
    std::optional<std::uint64_t> seed, sim_seed;
    std::optional<double> tau, eta, qkl;
    std::optional<std::size_t> budget;
    std::optional<unsigned> threads;
    std::optional<int> capacity;
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config, "JSON run configuration");
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_option("--seed", f.seed, "random seed");
    cmd->add_option("--tau", f.tau, "aggregation interval in seconds");
}

transim::RunConfig resolve(const Flags& f) {
    transim::RunConfig c = f.config.empty() ? transim::RunConfig{} : transim::read_run_config(f.config);
    if (f.out) c.out_dir = *f.out;
    if (f.data) c.data_dir = *f.data;
    if (f.network) c.network_file = *f.network;
    if (f.timetable) c.timetable_file = *f.timetable;
    if (f.demand) c.demand_file = *f.demand;
    if (f.beta) c.beta_file = *f.beta;
    if (f.choice) c.choice = transim::parse_choice_source(*f.choice);
    if (f.seed) c.seed = f.seed;
    if (f.sim_seed) c.sim_seed = f.sim_seed;
    if (f.tau) c.tau_s = f.tau;
    if (f.eta) c.eta = *f.eta;
    if (f.qkl) c.q_kl = *f.qkl;
    if (f.budget) c.budget = *f.budget;
    if (f.threads) c.threads = *f.threads;
    if (f.capacity) c.capacity = f.capacity;
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Schedule-based transit assignment: generate, simulate, calibrate, compare"};
    app.require_subcommand(1);
    Flags f;

    auto* generate = app.add_subcommand("generate", "build a synthetic dataset");
    add_common(generate, f);
    generate->add_option("--network", f.network, "network JSON (default: bundled network)");
    generate->add_option("--timetable", f.timetable, "timetable CSV for a custom network");
    generate->add_option("--demand", f.demand, "tap-in CSV for a custom network");
    generate->add_option("--capacity", f.capacity, "override train capacity");

    auto* simulate = app.add_subcommand("simulate", "simulate a dataset under a choice model");
    add_common(simulate, f);
    simulate->add_option("--data", f.data, "dataset directory");
    simulate->add_option("--choice", f.choice, "calibrated|uniform|shortest|true");
    simulate->add_option("--beta", f.beta, "parameter file for --choice calibrated");
    simulate->add_option("--capacity", f.capacity, "override train capacity");

    auto* calibrate = app.add_subcommand("calibrate", "estimate route choice parameters");
    add_common(calibrate, f);
    calibrate->add_option("--data", f.data, "dataset directory");
    calibrate->add_option("--budget", f.budget, "simulation budget");
    calibrate->add_option("--eta", f.eta, "weight of the journey-time term");
    calibrate->add_option("--qkl", f.qkl, "minimum exit count for a journey-time term");
    calibrate->add_option("--sim-seed", f.sim_seed, "simulation seed");
    calibrate->add_option("--threads", f.threads, "parallel evaluations of the initial design");

    auto* compare = app.add_subcommand("compare", "compare calibrated and benchmark models");
    add_common(compare, f);
    compare->add_option("--data", f.data, "dataset directory");
    compare->add_option("--beta", f.beta, "calibrated parameter file");
    compare->add_option("--sim-seed", f.sim_seed, "simulation seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    transim::RunConfig config;
    try {
        config = resolve(f);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    if (generate->parsed()) return transim::cmd_generate(config, std::cout, std::cerr);
    if (simulate->parsed()) return transim::cmd_simulate(config, std::cout, std::cerr);
    if (calibrate->parsed()) return transim::cmd_calibrate(config, std::cout, std::cerr);
    return transim::cmd_compare(config, std::cout, std::cerr);
}
