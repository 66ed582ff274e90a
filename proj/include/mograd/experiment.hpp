#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mograd/problem.hpp"
#include "mograd/problem_suite.hpp"
#include "mograd/solvers.hpp"

namespace mograd {

struct QuadraticSpec {
    Vector a1;
    Vector a2;
};

using ProblemSpec = std::variant<LogSumExpSpec, WittingSpec, QuadraticSpec>;

/// Starting points: explicit list and/or box sampling.
struct BoxSampling {
    int count = 1;
    double low = -1.0;
    double high = 1.0;
    std::uint64_t seed = 0;
};

struct StartSpec {
    std::vector<Vector> points;
    std::optional<BoxSampling> box;
};

struct OutputSpec {
    std::string dir = "out";
    int trace_thin = 1;          // write every trace_thin-th row plus the last
    bool write_traces = true;
    bool trace_energies = false; // add energy columns to traces
    bool plot_data = false;      // emit per-figure CSV bundles
};

struct NamedSolverConfig {
    std::string name;  // defaults to the method name
    SolverConfig cfg;
};

struct ExperimentConfig {
    ProblemSpec problem;
    std::vector<NamedSolverConfig> solvers;
    StartSpec starts;
    OutputSpec output;
    int threads = 1;
};

/// Parses and validates a config JSON document. Throws ConfigError with a
/// list of problems when invalid.
ExperimentConfig load_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config_file(const std::string& path);
std::string config_schema_summary();

struct SummaryRow {
    std::string solver;
    int start_id = 0;
    int iterations = 0;  // steps taken, k_final - 1
    TerminationReason termination = TerminationReason::max_iters;
    Vector final_values;
    double final_kkt = 0.0;
    std::optional<double> final_pareto_distance;
    double wall_time_s = 0.0;
};

struct ExperimentResult {
    std::vector<SummaryRow> rows;
    std::vector<std::string> trace_files;
    std::string summary_file;
    bool any_row_failed = false;
};

/// Runs the full (solver x start) batch, writing one trace CSV per cell and a
/// JSON summary. Deterministic given seeds (wall times excluded); independent
/// cells may run on `cfg.threads` workers without affecting the outputs.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Writes tidy per-figure CSV bundles (paths, value curves, image-space
/// scatter), all keyed (figure_id, series, k, value).
std::vector<std::string> emit_plot_data(const ExperimentConfig& cfg,
                                        const std::vector<SummaryRow>& rows,
                                        const std::vector<RunRecord>& records,
                                        const std::string& dir);

MOProblem build_problem(const ProblemSpec& spec);
std::vector<Vector> build_starts(const StartSpec& starts, int n);

}  // namespace mograd
