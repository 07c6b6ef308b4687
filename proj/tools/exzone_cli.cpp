#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "exzone/commands.hpp"

namespace {

exzone::io::ScenarioFile load_scenario(const std::string& path) {
    if (path.empty()) return exzone::io::parse_scenario("");
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read scenario file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return exzone::io::parse_scenario(ss.str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"D2D-underlaid massive-MIMO exclusion-zone simulator and optimizer"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool seed_set = false;
    long drops = 0;
    std::string re_grid;
    int threads = 0;

    app.add_option("--scenario", scenario_path, "scenario file (key = value lines)");
    app.add_option("--out", out_dir, "output directory for CSV files");
    app.add_option("--seed", seed, "override the scenario master seed")
        ->each([&](const std::string&) { seed_set = true; });
    app.add_option("--drops", drops, "override the scenario drop count");
    app.add_option("--re-grid", re_grid, "override the Re grid, start:stop:step");
    app.add_option("--threads", threads, "worker threads (0 = auto)");

    auto* analyze = app.add_subcommand("analyze", "closed-form report over the Re grid");
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo sweeps over the Re grid");
    auto* optimize = app.add_subcommand("optimize", "KKT solve per interference budget");
    auto* validate = app.add_subcommand("validate", "analytic-vs-empirical agreement suite");

    CLI11_PARSE(app, argc, argv);

    try {
        auto scenario = load_scenario(scenario_path);
        if (seed_set) scenario.seed = seed;
        if (drops > 0) scenario.n_drops = drops;
        if (!re_grid.empty()) {
            double a = 0, b = 0, c = 0;
            if (std::sscanf(re_grid.c_str(), "%lf:%lf:%lf", &a, &b, &c) != 3)
                throw std::runtime_error("--re-grid expects start:stop:step");
            scenario.re_grid_start = a;
            scenario.re_grid_stop = b;
            scenario.re_grid_step = c;
        }

        if (analyze->parsed()) return exzone::io::cmd_analyze(scenario, out_dir, threads);
        if (simulate->parsed()) return exzone::io::cmd_simulate(scenario, out_dir, threads);
        if (optimize->parsed()) return exzone::io::cmd_optimize(scenario, out_dir, threads);
        if (validate->parsed()) return exzone::io::cmd_validate(scenario, out_dir, threads);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
