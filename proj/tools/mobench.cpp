// mobench: configuration-driven benchmark runner for the multiobjective
// gradient methods in this library. Subcommands:
//   run <config.json>      execute the batch, write traces + summary
//   validate <config.json> check a config without running it
//   oracle                 compare the simplex QP solver against the grid oracle

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "mograd/experiment.hpp"
#include "mograd/problem_suite.hpp"
#include "mograd/simplex_solver.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& out_override, long seed_override,
            int threads_override) {
    mograd::ExperimentConfig cfg;
    try {
        cfg = mograd::load_experiment_config_file(config_path);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    if (!out_override.empty()) cfg.output.dir = out_override;
    if (seed_override >= 0) {
        if (cfg.starts.box)
            cfg.starts.box->seed = static_cast<std::uint64_t>(seed_override);
        else
            std::cerr << "note: --seed ignored, config has no box sampling\n";
    }
    if (threads_override > 0) cfg.threads = threads_override;

    try {
        mograd::ExperimentResult result = mograd::run_experiment(cfg);
        long total_iters = 0;
        int failed = 0;
        for (const auto& row : result.rows) {
            total_iters += row.iterations;
            if (row.termination == mograd::TerminationReason::eval_failure) ++failed;
        }
        std::cout << "ran " << result.rows.size() << " cells, " << total_iters
                  << " total iterations, summary: " << result.summary_file << "\n";
        if (result.any_row_failed) {
            std::cerr << failed << " cell(s) ended in eval_failure\n";
            return 2;
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
}

int cmd_validate(const std::string& config_path) {
    try {
        mograd::load_experiment_config_file(config_path);
        std::cout << "config OK\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
}

int cmd_oracle(int instances, std::uint64_t seed) {
    mograd::SplitMix64 rng(seed);
    const int ms[] = {2, 3};
    const int ns[] = {2, 5, 20};
    double worst = 0.0;
    for (int it = 0; it < instances; ++it) {
        const int m = ms[rng.next() % 2];
        const int n = ns[rng.next() % 3];
        mograd::HullProblem hp;
        hp.columns.resize(n, m);
        hp.target.resize(n);
        for (int c = 0; c < m; ++c)
            for (int r = 0; r < n; ++r) hp.columns(r, c) = rng.uniform(-2.0, 2.0);
        for (int r = 0; r < n; ++r) hp.target[r] = rng.uniform(-2.0, 2.0);
        const double solver_obj = mograd::solve_hull_least_squares(hp).objective;
        const double oracle_obj = mograd::brute_force_simplex_oracle(hp, 1e-3);
        worst = std::max(worst, std::abs(solver_obj - oracle_obj));
    }
    std::printf("%d instances, worst |solver - oracle| objective gap: %.3e\n", instances, worst);
    if (worst > 1e-8) {
        std::printf("FAIL (tolerance 1e-08)\n");
        return 1;
    }
    std::printf("PASS (tolerance 1e-08)\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multiobjective gradient method benchmark runner"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    long seed_override = -1;
    int threads = 0;
    auto* run_cmd = app.add_subcommand("run", "run an experiment config");
    run_cmd->add_option("config", config_path, "config JSON file")->required();
    run_cmd->add_option("--out", out_dir, "override output directory");
    run_cmd->add_option("--seed", seed_override, "override start-sampling seed");
    run_cmd->add_option("--threads", threads, "worker thread count");

    std::string validate_path;
    auto* validate_cmd = app.add_subcommand("validate", "validate an experiment config");
    validate_cmd->add_option("config", validate_path, "config JSON file")->required();

    int oracle_instances = 200;
    std::uint64_t oracle_seed = 2024;
    auto* oracle_cmd =
        app.add_subcommand("oracle", "run the brute-force simplex oracle comparison");
    oracle_cmd->add_option("--instances", oracle_instances, "number of random instances");
    oracle_cmd->add_option("--seed", oracle_seed, "instance seed");

    CLI11_PARSE(app, argc, argv);

    if (run_cmd->parsed()) return cmd_run(config_path, out_dir, seed_override, threads);
    if (validate_cmd->parsed()) return cmd_validate(validate_path);
    if (oracle_cmd->parsed()) return cmd_oracle(oracle_instances, oracle_seed);
    return 1;
}
