#include "mograd/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "mograd/diagnostics.hpp"

namespace mograd {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double require_number(const json& j, const std::string& key, std::vector<std::string>& errs,
                      double fallback = 0.0) {
    if (!j.contains(key)) {
        errs.push_back("missing field '" + key + "'");
        return fallback;
    }
    if (!j[key].is_number()) {
        errs.push_back("field '" + key + "' must be a number");
        return fallback;
    }
    return j[key].get<double>();
}

// Seeds are kept on the unsigned 64-bit path so large values survive parsing.
std::uint64_t require_seed(const json& j, const std::string& key, std::vector<std::string>& errs) {
    if (!j.contains(key)) {
        errs.push_back("missing field '" + key + "'");
        return 0;
    }
    if (j[key].is_number_unsigned()) return j[key].get<std::uint64_t>();
    if (j[key].is_number_integer() && j[key].get<std::int64_t>() >= 0)
        return static_cast<std::uint64_t>(j[key].get<std::int64_t>());
    errs.push_back("field '" + key + "' must be a nonnegative integer");
    return 0;
}

Vector parse_point(const json& arr, std::vector<std::string>& errs) {
    if (!arr.is_array() || arr.empty()) {
        errs.push_back("start points must be nonempty arrays of numbers");
        return Vector();
    }
    Vector v(arr.size());
    int i = 0;
    for (const auto& e : arr) {
        if (!e.is_number()) {
            errs.push_back("start points must contain only numbers");
            return Vector();
        }
        v[i++] = e.get<double>();
    }
    return v;
}

Vector parse_vector(const json& j, const std::string& key, std::vector<std::string>& errs) {
    if (!j.contains(key) || !j[key].is_array()) {
        errs.push_back("field '" + key + "' must be an array of numbers");
        return Vector();
    }
    return parse_point(j[key], errs);
}

ProblemSpec parse_problem(const json& j, std::vector<std::string>& errs) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
        errs.push_back("problem.type must be one of logsumexp|witting|quadratic");
        return WittingSpec{};
    }
    const std::string type = j["type"].get<std::string>();
    if (type == "logsumexp") {
        LogSumExpSpec s;
        s.n = static_cast<int>(require_number(j, "n", errs, 20));
        s.m = static_cast<int>(require_number(j, "m", errs, 3));
        s.p = static_cast<int>(require_number(j, "p", errs, 50));
        s.seed = require_seed(j, "seed", errs);
        s.box_low = j.value("box_low", -1.0);
        s.box_high = j.value("box_high", 1.0);
        if (s.n < 1 || s.m < 1 || s.p < 1) errs.push_back("logsumexp needs positive n, m, p");
        if (!(s.box_low < s.box_high)) errs.push_back("logsumexp needs box_low < box_high");
        return s;
    }
    if (type == "witting") {
        WittingSpec s;
        s.lambda = j.value("lambda", 0.6);
        if (!(s.lambda >= 0.0)) errs.push_back("witting needs lambda >= 0");
        return s;
    }
    if (type == "quadratic") {
        QuadraticSpec s;
        s.a1 = parse_vector(j, "a1", errs);
        s.a2 = parse_vector(j, "a2", errs);
        if (s.a1.size() == 0 || s.a1.size() != s.a2.size())
            errs.push_back("quadratic needs a1 and a2 of equal positive dimension");
        else if (s.a1 == s.a2)
            errs.push_back("quadratic needs a1 != a2");
        return s;
    }
    errs.push_back("unknown problem type '" + type + "'");
    return WittingSpec{};
}

NamedSolverConfig parse_solver(const json& j, std::vector<std::string>& errs) {
    NamedSolverConfig out;
    if (!j.is_object() || !j.contains("method") || !j["method"].is_string()) {
        errs.push_back("solver entries need a 'method' string");
        return out;
    }
    try {
        out.cfg.method = method_from_name(j["method"].get<std::string>());
    } catch (const std::exception& e) {
        errs.push_back(e.what());
        return out;
    }
    out.name = j.value("name", method_name(out.cfg.method));
    out.cfg.step_size = require_number(j, "step_size", errs, 1e-2);
    out.cfg.max_iters = static_cast<int>(require_number(j, "max_iters", errs, 1000));
    out.cfg.tol = j.value("tol", 0.0);
    out.cfg.alpha = j.value("alpha", out.cfg.method == Method::NesterovRef ? 3.0 : 1.0);
    out.cfg.h = j.value("h", 0.1);
    out.cfg.track_kkt = j.value("track_kkt", false);
    if (j.contains("backtracking")) {
        const auto& b = j["backtracking"];
        BacktrackingConfig bt;
        bt.s0 = require_number(b, "s0", errs, 1.0);
        bt.sigma = require_number(b, "sigma", errs, 0.5);
        out.cfg.backtracking = bt;
    }
    try {
        out.cfg.validate();
    } catch (const std::exception& e) {
        errs.push_back(std::string("solver '") + out.name + "': " + e.what());
    }
    return out;
}

json problem_to_json(const ProblemSpec& spec) {
    json j;
    if (const auto* ls = std::get_if<LogSumExpSpec>(&spec)) {
        j["type"] = "logsumexp";
        j["n"] = ls->n;
        j["m"] = ls->m;
        j["p"] = ls->p;
        j["seed"] = ls->seed;
        j["box_low"] = ls->box_low;
        j["box_high"] = ls->box_high;
    } else if (const auto* w = std::get_if<WittingSpec>(&spec)) {
        j["type"] = "witting";
        j["lambda"] = w->lambda;
    } else if (const auto* q = std::get_if<QuadraticSpec>(&spec)) {
        j["type"] = "quadratic";
        j["a1"] = std::vector<double>(q->a1.data(), q->a1.data() + q->a1.size());
        j["a2"] = std::vector<double>(q->a2.data(), q->a2.data() + q->a2.size());
    }
    return j;
}

}  // namespace

ExperimentConfig load_experiment_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    std::vector<std::string> errs;
    ExperimentConfig cfg;
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    if (!j.contains("problem")) {
        errs.push_back("missing 'problem'");
    } else {
        cfg.problem = parse_problem(j["problem"], errs);
    }
    if (!j.contains("solvers") || !j["solvers"].is_array() || j["solvers"].empty()) {
        errs.push_back("'solvers' must be a nonempty array");
    } else {
        for (const auto& s : j["solvers"]) cfg.solvers.push_back(parse_solver(s, errs));
        std::set<std::string> names;
        for (const auto& s : cfg.solvers)
            if (!names.insert(s.name).second)
                errs.push_back("duplicate solver name '" + s.name + "' (set distinct 'name's)");
    }
    if (!j.contains("starts") || !j["starts"].is_object()) {
        errs.push_back("'starts' must be an object with 'points' and/or 'box'");
    } else {
        const auto& st = j["starts"];
        if (st.contains("points")) {
            if (!st["points"].is_array()) {
                errs.push_back("starts.points must be an array of arrays");
            } else {
                for (const auto& pt : st["points"])
                    cfg.starts.points.push_back(parse_point(pt, errs));
            }
        }
        if (st.contains("box")) {
            const auto& b = st["box"];
            BoxSampling box;
            box.count = static_cast<int>(require_number(b, "count", errs, 1));
            box.low = require_number(b, "low", errs, -1.0);
            box.high = require_number(b, "high", errs, 1.0);
            box.seed = require_seed(b, "seed", errs);
            if (box.count < 1) errs.push_back("starts.box.count must be >= 1");
            if (!(box.low < box.high) || !std::isfinite(box.low) || !std::isfinite(box.high))
                errs.push_back("starts.box needs finite low < high");
            cfg.starts.box = box;
        }
        if (cfg.starts.points.empty() && !cfg.starts.box)
            errs.push_back("starts needs at least one point or a box sampling spec");
    }
    if (j.contains("output")) {
        const auto& o = j["output"];
        cfg.output.dir = o.value("dir", "out");
        cfg.output.trace_thin = o.value("trace_thin", 1);
        cfg.output.write_traces = o.value("write_traces", true);
        cfg.output.trace_energies = o.value("trace_energies", false);
        cfg.output.plot_data = o.value("plot_data", false);
        if (cfg.output.trace_thin < 1) errs.push_back("output.trace_thin must be >= 1");
    }
    cfg.threads = j.value("threads", 1);
    if (cfg.threads < 1) errs.push_back("threads must be >= 1");

    if (!errs.empty()) {
        std::string msg = "invalid config:";
        for (const auto& e : errs) msg += "\n  - " + e;
        throw ConfigError(msg);
    }
    return cfg;
}

ExperimentConfig load_experiment_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_experiment_config(ss.str());
}

std::string config_schema_summary() {
    return "problem: {type: logsumexp|witting|quadratic, ...}; "
           "solvers: [{method, step_size, max_iters, tol, alpha?, h?, backtracking?{s0,sigma}, "
           "track_kkt?, name?}]; "
           "starts: {points?: [[..]], box?: {count, low, high, seed}}; "
           "output: {dir, trace_thin, write_traces, trace_energies, plot_data}; threads";
}

MOProblem build_problem(const ProblemSpec& spec) {
    if (const auto* ls = std::get_if<LogSumExpSpec>(&spec)) return make_logsumexp(*ls);
    if (const auto* w = std::get_if<WittingSpec>(&spec)) return make_witting(*w);
    const auto& q = std::get<QuadraticSpec>(spec);
    return make_quadratic_biobjective(q.a1, q.a2);
}

std::vector<Vector> build_starts(const StartSpec& starts, int n) {
    std::vector<Vector> out;
    for (const auto& pt : starts.points) {
        if (pt.size() != n) throw ConfigError("explicit start has wrong dimension");
        out.push_back(pt);
    }
    if (starts.box) {
        SplitMix64 rng(starts.box->seed);
        for (int i = 0; i < starts.box->count; ++i) {
            Vector x(n);
            for (int j = 0; j < n; ++j) x[j] = rng.uniform(starts.box->low, starts.box->high);
            out.push_back(std::move(x));
        }
    }
    return out;
}

namespace {

struct CellOutcome {
    RunRecord record;
    double wall_seconds = 0.0;
};

EnergyKind energy_kind_for(Method m) {
    return m == Method::Inertial ? EnergyKind::inertial_h2 : EnergyKind::accelerated_s;
}

void write_trace_csv(const std::string& path, const MOProblem& p, const NamedSolverConfig& sc,
                     const RunRecord& rec, const OutputSpec& out, double final_kkt) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write trace file: " + path);

    const bool with_x = p.n <= 8;
    EnergyTrace energies;
    if (out.trace_energies && rec.k_final >= 1) {
        const EnergyKind kind = energy_kind_for(sc.cfg.method);
        energies = energy_trace(rec, kind,
                                kind == EnergyKind::inertial_h2 ? sc.cfg.h : sc.cfg.step_size);
    }

    f << "k";
    for (int i = 1; i <= p.m; ++i) f << ",f_" << i;
    f << ",step_size,kkt_residual";
    if (out.trace_energies)
        for (int i = 1; i <= p.m; ++i) f << ",energy_" << i;
    if (with_x)
        for (int j = 1; j <= p.n; ++j) f << ",x_" << j;
    f << "\n";

    const int K = rec.k_final;
    for (int k = 1; k <= K; ++k) {
        if ((k - 1) % out.trace_thin != 0 && k != K) continue;
        const size_t idx = static_cast<size_t>(k - 1);
        f << k;
        for (int i = 0; i < p.m; ++i) f << ',' << fmt(rec.values[idx][i]);
        f << ',' << fmt(rec.step_sizes[idx]);
        f << ',';
        if (!rec.kkt_residuals.empty())
            f << fmt(rec.kkt_residuals[idx]);
        else if (k == K)
            f << fmt(final_kkt);
        if (out.trace_energies)
            for (int i = 0; i < p.m; ++i) f << ',' << fmt(energies.energies[idx][i]);
        if (with_x) {
            const Vector* x = rec.iterate_at(k);
            for (int j = 0; j < p.n; ++j) {
                f << ',';
                if (x) f << fmt((*x)[j]);
            }
        }
        f << "\n";
    }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    const MOProblem problem = build_problem(cfg.problem);
    const std::vector<Vector> starts = build_starts(cfg.starts, problem.n);
    if (starts.empty()) throw ConfigError("no start points configured");
    for (const auto& sc : cfg.solvers) {
        sc.cfg.validate();
        if (sc.cfg.method == Method::NesterovRef && problem.m != 1)
            throw ConfigError("solver '" + sc.name + "': NesterovRef needs a single objective");
    }

    struct Cell {
        int solver;
        int start;
    };
    std::vector<Cell> cells;
    for (int s = 0; s < static_cast<int>(cfg.solvers.size()); ++s)
        for (int i = 0; i < static_cast<int>(starts.size()); ++i) cells.push_back({s, i});

    std::vector<CellOutcome> outcomes(cells.size());
    std::atomic<size_t> cursor{0};
    auto work = [&]() {
        for (;;) {
            const size_t c = cursor.fetch_add(1);
            if (c >= cells.size()) return;
            const Cell& cell = cells[c];
            const auto t0 = std::chrono::steady_clock::now();
            try {
                outcomes[c].record =
                    run(problem, starts[cell.start], cfg.solvers[cell.solver].cfg);
            } catch (const std::exception&) {
                // Per-row failures must not take down the batch (or a worker).
                outcomes[c].record = RunRecord{};
                outcomes[c].record.reason = TerminationReason::eval_failure;
            }
            const auto t1 = std::chrono::steady_clock::now();
            outcomes[c].wall_seconds = std::chrono::duration<double>(t1 - t0).count();
        }
    };
    const int threads = std::max(1, cfg.threads);
    if (threads == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    ExperimentResult result;
    result.rows.reserve(cells.size());
    std::vector<double> final_kkts(cells.size(), 0.0);
    for (size_t c = 0; c < cells.size(); ++c) {
        const Cell& cell = cells[c];
        const RunRecord& rec = outcomes[c].record;
        SummaryRow row;
        row.solver = cfg.solvers[cell.solver].name;
        row.start_id = cell.start;
        row.iterations = std::max(0, rec.k_final - 1);
        row.termination = rec.reason;
        row.wall_time_s = outcomes[c].wall_seconds;
        if (rec.k_final >= 1) {
            row.final_values = rec.values.back();
            const Vector* xf = rec.iterate_at(rec.k_final);
            if (xf) {
                try {
                    row.final_kkt = kkt_residual(problem, *xf);
                } catch (const EvaluationError&) {
                    // Final values can be finite at an iterate whose gradients
                    // already overflow.
                    row.final_kkt = std::numeric_limits<double>::quiet_NaN();
                }
                if (problem.known_pareto) row.final_pareto_distance = pareto_distance(problem, *xf);
            }
        }
        if (rec.reason == TerminationReason::eval_failure) result.any_row_failed = true;
        final_kkts[c] = row.final_kkt;
        result.rows.push_back(std::move(row));
    }

    fs::create_directories(cfg.output.dir);

    if (cfg.output.write_traces) {
        for (size_t c = 0; c < cells.size(); ++c) {
            const Cell& cell = cells[c];
            std::ostringstream name;
            name << "trace_" << cfg.solvers[cell.solver].name << "_s" << cell.start << ".csv";
            const std::string path = (fs::path(cfg.output.dir) / name.str()).string();
            write_trace_csv(path, problem, cfg.solvers[cell.solver], outcomes[c].record,
                            cfg.output, final_kkts[c]);
            result.trace_files.push_back(path);
        }
    }

    json summary;
    summary["problem"] = problem_to_json(cfg.problem);
    summary["starts"] = static_cast<int>(starts.size());
    summary["rows"] = json::array();
    for (const auto& row : result.rows) {
        json r;
        r["solver"] = row.solver;
        r["start_id"] = row.start_id;
        r["iterations"] = row.iterations;
        r["termination"] = termination_name(row.termination);
        r["final_values"] =
            std::vector<double>(row.final_values.data(), row.final_values.data() + row.final_values.size());
        r["final_kkt"] = row.final_kkt;
        if (row.final_pareto_distance) r["final_pareto_distance"] = *row.final_pareto_distance;
        r["wall_time_s"] = row.wall_time_s;
        summary["rows"].push_back(std::move(r));
    }
    json totals;
    for (const auto& sc : cfg.solvers) {
        long iters = 0;
        double wall = 0.0;
        for (const auto& row : result.rows) {
            if (row.solver == sc.name) {
                iters += row.iterations;
                wall += row.wall_time_s;
            }
        }
        json t;
        t["iterations"] = iters;
        t["wall_time_s"] = wall;
        totals[sc.name] = std::move(t);
    }
    summary["totals"] = std::move(totals);

    result.summary_file = (fs::path(cfg.output.dir) / "summary.json").string();
    {
        std::ofstream f(result.summary_file, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write summary file: " + result.summary_file);
        f << summary.dump(2) << "\n";
    }

    if (cfg.output.plot_data) {
        std::vector<RunRecord> records;
        records.reserve(outcomes.size());
        for (auto& o : outcomes) records.push_back(std::move(o.record));
        auto files = emit_plot_data(cfg, result.rows, records, cfg.output.dir);
        result.trace_files.insert(result.trace_files.end(), files.begin(), files.end());
    }
    return result;
}

std::vector<std::string> emit_plot_data(const ExperimentConfig& cfg,
                                        const std::vector<SummaryRow>& rows,
                                        const std::vector<RunRecord>& records,
                                        const std::string& dir) {
    fs::create_directories(dir);
    std::vector<std::string> files;

    auto open_bundle = [&](const std::string& name) {
        const std::string path = (fs::path(dir) / name).string();
        files.push_back(path);
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write plot bundle: " + path);
        f << "figure_id,series,k,value\n";
        return f;
    };

    // Iterate paths: one series per (solver, start, coordinate).
    {
        std::ofstream f = open_bundle("fig_iterate_paths.csv");
        for (size_t c = 0; c < records.size(); ++c) {
            const RunRecord& rec = records[c];
            const int ncoord = rec.iterates.empty()
                                   ? 0
                                   : static_cast<int>(std::min<Eigen::Index>(rec.iterates[0].size(), 8));
            for (size_t s = 0; s < rec.iterates.size(); ++s)
                for (int j = 0; j < ncoord; ++j)
                    f << "iterate_paths," << rows[c].solver << "/start" << rows[c].start_id
                      << "/x" << (j + 1) << ',' << rec.iterate_ks[s] << ','
                      << fmt(rec.iterates[s][j]) << "\n";
        }
    }
    // Per-objective value curves.
    {
        std::ofstream f = open_bundle("fig_value_curves.csv");
        for (size_t c = 0; c < records.size(); ++c) {
            const RunRecord& rec = records[c];
            for (size_t k = 0; k < rec.values.size(); ++k)
                for (int i = 0; i < rec.values[k].size(); ++i)
                    f << "value_curves," << rows[c].solver << "/start" << rows[c].start_id
                      << "/f" << (i + 1) << ',' << (k + 1) << ',' << fmt(rec.values[k][i]) << "\n";
        }
    }
    // Image-space scatter of final values.
    {
        std::ofstream f = open_bundle("fig_image_space.csv");
        for (size_t c = 0; c < records.size(); ++c) {
            const RunRecord& rec = records[c];
            if (rec.values.empty()) continue;
            for (int i = 0; i < rec.values.back().size(); ++i)
                f << "image_space," << rows[c].solver << "/start" << rows[c].start_id
                  << "/f" << (i + 1) << ',' << rec.k_final << ',' << fmt(rec.values.back()[i])
                  << "\n";
        }
    }
    (void)cfg;
    return files;
}

}  // namespace mograd
