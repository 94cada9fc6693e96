// assignqp command-line tool: solve / oracle / thresholds / mmd-select /
// synth-bench.  Structured results go to JSON files (and stdout), time
// series to CSV; every run leaves a manifest with input digests so outputs
// are reproducible byte for byte.
//
// Exit codes: 0 success (solve: converged_binary), 1 input error,
// 2 converged_nonbinary, 3 max_iter, 4 enumeration size guard.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "assignqp/io.hpp"
#include "assignqp/mmd.hpp"
#include "assignqp/oracle.hpp"
#include "assignqp/problem.hpp"
#include "assignqp/sha256.hpp"
#include "assignqp/solver.hpp"
#include "assignqp/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "assignqp 0.1.0";

enum class LogLevel { error = 0, info = 1, debug = 2 };

LogLevel log_level() {
    const char* env = std::getenv("ASSIGNQP_LOG");
    if (!env) return LogLevel::error;
    const std::string value(env);
    if (value == "debug") return LogLevel::debug;
    if (value == "info") return LogLevel::info;
    return LogLevel::error;
}

void log_info(const std::string& msg) {
    if (log_level() >= LogLevel::info) std::cerr << "[info] " << msg << "\n";
}

void log_warn(const std::string& msg) { std::cerr << "[warn] " << msg << "\n"; }

struct OutputContext {
    fs::path out_dir;
    std::string format = "json";
    std::string subcommand;
    json config;
    json inputs = json::object();
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    void add_input(const std::string& path) { inputs[path] = assignqp::sha256_file_hex(path); }

    fs::path file(const std::string& name) const { return out_dir / name; }

    void write_json(const std::string& name, const json& doc) const {
        std::ofstream out(file(name));
        if (!out) throw std::runtime_error("cannot write " + file(name).string());
        out << doc.dump(2) << "\n";
    }

    void write_manifest() const {
        json manifest{{"tool", kVersion},
                      {"subcommand", subcommand},
                      {"config", config},
                      {"inputs", inputs},
                      {"duration_seconds",
                       std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                           .count()}};
        write_json("manifest.json", manifest);
    }
};

void flatten_json(const json& doc, const std::string& prefix, std::ostream& out) {
    if (doc.is_object()) {
        for (const auto& [key, value] : doc.items())
            flatten_json(value, prefix.empty() ? key : prefix + "." + key, out);
    } else if (doc.is_array()) {
        std::string joined;
        for (const auto& v : doc) {
            if (!joined.empty()) joined += ';';
            joined += v.dump();
        }
        out << prefix << "," << joined << "\n";
    } else {
        out << prefix << "," << doc.dump() << "\n";
    }
}

// stdout carries only data; --format picks its shape
void emit(const OutputContext& ctx, const json& doc) {
    if (ctx.format == "csv") {
        std::ostringstream buf;
        flatten_json(doc, "", buf);
        std::cout << buf.str();
    } else {
        std::cout << doc.dump(2) << "\n";
    }
}

json matrix_json(const assignqp::Matrix& M) {
    return json(assignqp::rowmajor_from_matrix(M));
}

json bits_json(const assignqp::Matrix& M) {
    std::vector<int> bits;
    bits.reserve(static_cast<size_t>(M.size()));
    for (Eigen::Index i = 0; i < M.rows(); ++i)
        for (Eigen::Index j = 0; j < M.cols(); ++j) bits.push_back(M(i, j) == 1.0 ? 1 : 0);
    return json(bits);
}

json thresholds_json(const assignqp::AssignmentProblem& problem, double eta, double beta) {
    const assignqp::EtaThresholds t = assignqp::eta_thresholds(problem);
    return json{{"concavity", t.concavity},
                {"equivalence", t.equivalence},
                {"kkt_binary", t.kkt_binary},
                {"beta_min_for_eta", eta / 4.0},
                {"eta", eta},
                {"beta", beta},
                {"beta_ok", beta > eta / 4.0}};
}

json plan_json(const assignqp::BatchPlan& plan) {
    return json{{"strategy", assignqp::to_string(plan.strategy)},
                {"batches", plan.batches},
                {"mmd", plan.mmd}};
}

struct SolverFlags {
    double beta = 20.0;
    double eta = 1.0;
    double eps_kkt = 1e-6;
    double eps_primal = 1e-6;
    double binary_tol = 1e-9;
    int max_iter = 20000;
    std::string init = "random";
    std::uint64_t seed = 42;

    assignqp::SolverConfig to_config() const {
        assignqp::SolverConfig cfg;
        cfg.beta = beta;
        cfg.eta = eta;
        cfg.eps_kkt = eps_kkt;
        cfg.eps_primal = eps_primal;
        cfg.binary_tol = binary_tol;
        cfg.max_iter = max_iter;
        cfg.init = init == "uniform" ? assignqp::InitMode::uniform
                                     : assignqp::InitMode::random_feasible;
        cfg.seed = seed;
        return cfg;
    }

    json to_json() const {
        return json{{"beta", beta},         {"eta", eta},       {"eps_kkt", eps_kkt},
                    {"eps_primal", eps_primal}, {"binary_tol", binary_tol},
                    {"max_iter", max_iter}, {"init", init},     {"seed", seed}};
    }
};

void add_solver_flags(CLI::App* cmd, SolverFlags& flags) {
    cmd->add_option("--beta", flags.beta, "ADMM penalty parameter");
    cmd->add_option("--eta", flags.eta, "regularization strength");
    cmd->add_option("--eps-kkt", flags.eps_kkt, "threshold on the KKT residual h");
    cmd->add_option("--eps-primal", flags.eps_primal, "threshold on the primal residual p");
    cmd->add_option("--binary-tol", flags.binary_tol, "entry-wise binariness tolerance");
    cmd->add_option("--max-iter", flags.max_iter, "iteration cap");
    cmd->add_option("--init", flags.init, "start point: random or uniform")
        ->check(CLI::IsMember({"random", "uniform"}));
    cmd->add_option("--seed", flags.seed, "seed for the random start");
}

int cmd_solve(const std::string& problem_file, const SolverFlags& flags, OutputContext& ctx) {
    ctx.add_input(problem_file);
    const assignqp::AssignmentProblem problem = assignqp::read_problem_json(problem_file);
    const assignqp::SolverConfig cfg = flags.to_config();
    for (const auto& f : assignqp::validate(cfg).findings)
        if (f.severity == assignqp::ValidationIssue::Severity::warning) log_warn(f.message);
    for (const auto& f : assignqp::validate(problem).findings)
        if (f.severity == assignqp::ValidationIssue::Severity::warning) log_warn(f.message);

    log_info("solving n=" + std::to_string(problem.n) + " m=" + std::to_string(problem.m));
    const assignqp::SolveReport report = assignqp::solve(problem, cfg);
    const assignqp::MonitorReport monitors = assignqp::theory_monitors(report.trace, problem, cfg);

    json solution{{"termination", assignqp::to_string(report.termination)},
                  {"iterations", report.iterations},
                  {"objective_original", assignqp::objective_original(problem, report.final_X)},
                  {"final_X", matrix_json(report.final_X)},
                  {"thresholds", thresholds_json(problem, cfg.eta, cfg.beta)},
                  {"monitors",
                   {{"max_lambda_norm", monitors.max_lambda_norm},
                    {"lambda_plateau", monitors.lambda_plateau},
                    {"largest_lagrangian_jump", monitors.largest_lagrangian_jump},
                    {"descent_violation_fraction", monitors.descent_violation_fraction},
                    {"first_binary_iteration", monitors.first_binary_iteration
                                                   ? json(*monitors.first_binary_iteration)
                                                   : json(nullptr)}}}};
    if (report.rounded_X) {
        solution["rounded_X"] = bits_json(*report.rounded_X);
        solution["objective_rounded"] =
            assignqp::objective_original(problem, *report.rounded_X);
    }

    ctx.write_json("solution.json", solution);
    assignqp::write_trace_csv(ctx.file("trace.csv").string(), report.trace);
    ctx.write_manifest();
    emit(ctx, solution);

    switch (report.termination) {
        case assignqp::Termination::converged_binary: return 0;
        case assignqp::Termination::converged_nonbinary: return 2;
        case assignqp::Termination::max_iter: return 3;
    }
    return 3;
}

int cmd_oracle(const std::string& problem_file, int max_n,
               const std::optional<std::string>& solve_output, OutputContext& ctx) {
    ctx.add_input(problem_file);
    const assignqp::AssignmentProblem problem = assignqp::read_problem_json(problem_file);

    json doc;
    try {
        const auto [x_opt, f_opt] = assignqp::brute_force_solve(problem, max_n);
        doc["f_opt"] = f_opt;
        doc["X_opt"] = bits_json(x_opt);
        doc["candidates"] = assignqp::assignment_count(problem.n, problem.m, problem.b());
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }

    if (solve_output) {
        ctx.add_input(*solve_output);
        const json solution = json::parse(assignqp::read_file(*solve_output));
        const std::vector<double> flat = solution.at("final_X").get<std::vector<double>>();
        const assignqp::Matrix X =
            assignqp::matrix_from_rowmajor(flat, problem.n, problem.m, "final_X");
        doc["solve_objective"] = assignqp::objective_original(problem, X);
        doc["gap"] = doc["solve_objective"].get<double>() - doc["f_opt"].get<double>();
    }

    ctx.write_json("oracle.json", doc);
    ctx.write_manifest();
    emit(ctx, doc);
    return 0;
}

int cmd_thresholds(const std::string& problem_file, double eta, double beta, OutputContext& ctx) {
    ctx.add_input(problem_file);
    const assignqp::AssignmentProblem problem = assignqp::read_problem_json(problem_file);
    const json doc = thresholds_json(problem, eta, beta);
    ctx.write_json("thresholds.json", doc);
    ctx.write_manifest();
    emit(ctx, doc);
    return 0;
}

int cmd_mmd_select(const std::string& dataset_file, int m, const std::string& strategy, bool all,
                   std::optional<double> sigma, std::optional<double> eta_override,
                   const SolverFlags& flags, OutputContext& ctx) {
    ctx.add_input(dataset_file);
    const assignqp::Dataset data = assignqp::read_dataset_csv(dataset_file);
    if (m <= 0 || data.n % m != 0) {
        std::cerr << "error: m must divide the sample count " << data.n << "\n";
        return 1;
    }
    const int b = data.n / m;
    const assignqp::KernelMatrix kernel = assignqp::gaussian_kernel(data, sigma);
    if (kernel.sigma_fallback) log_warn("degenerate data: kernel bandwidth fell back to 1.0");
    log_info("kernel bandwidth sigma = " + std::to_string(kernel.bandwidth_sigma));

    assignqp::SolverConfig cfg = flags.to_config();
    if (eta_override) {
        cfg.eta = *eta_override;
    } else {
        cfg.eta = assignqp::default_selection_eta(
            assignqp::build_mmd_problem(kernel, m).problem.A);
        log_info("selection eta defaulted to " + std::to_string(cfg.eta));
    }

    const auto run_strategy = [&](const std::string& name) {
        if (name == "random") {
            assignqp::BatchPlan plan = assignqp::select_batches_random(data.n, m, b, flags.seed);
            plan.mmd = assignqp::mmd_objective(plan.M, kernel, b);
            return plan;
        }
        if (name == "vector") return assignqp::select_batches_vector(kernel, m, b, cfg);
        return assignqp::select_batches_matrix(kernel, m, cfg);
    };

    json result;
    if (all) {
        json comparison = json::object();
        for (const std::string& name : {"random", "vector", "matrix"}) {
            const assignqp::BatchPlan plan = run_strategy(name);
            ctx.write_json("batch_plan_" + name + ".json", plan_json(plan));
            comparison[name] = plan.mmd;
        }
        ctx.write_json("comparison.json", comparison);
        result = comparison;
    } else {
        const assignqp::BatchPlan plan = run_strategy(strategy);
        ctx.write_json("batch_plan_" + strategy + ".json", plan_json(plan));
        result = plan_json(plan);
    }
    ctx.write_manifest();
    emit(ctx, result);
    return 0;
}

struct BenchFlags {
    int groups = 4;
    int group_size = 20;
    int dim = 8;
    std::uint64_t instance_seed = 424242;
    double eig_min = 0.9;
    double eig_max = 1.1;
    double center_scale = 3.0;
    double noise_scale = 0.1;
    int epochs = 400;
    int batch_size = 4;
    int seeds = 3;
    std::uint64_t seed_base = 1;
    double lr_sgd = 0.05;
    double lr_momentum = 0.05;
    double lr_adam = 1e-3;
    std::vector<std::string> optimizers{"sgd", "adam"};
    std::vector<std::string> strategies{"random", "vector", "matrix"};
    std::vector<int> checkpoints;  // empty: quarter points of epochs
};

int cmd_synth_bench(const BenchFlags& flags, int threads, OutputContext& ctx) {
    assignqp::SyntheticSpec spec;
    spec.groups = flags.groups;
    spec.group_size = flags.group_size;
    spec.dim = flags.dim;
    spec.seed = flags.instance_seed;
    spec.eig_min = flags.eig_min;
    spec.eig_max = flags.eig_max;
    spec.center_scale = flags.center_scale;
    spec.noise_scale = flags.noise_scale;

    const assignqp::QuadraticInstance inst = assignqp::generate_synthetic(spec);
    if (inst.n() % flags.batch_size != 0) {
        std::cerr << "error: batch size must divide the sample count " << inst.n() << "\n";
        return 1;
    }

    std::vector<assignqp::Strategy> strategies;
    for (const std::string& name : flags.strategies) {
        if (name == "random") strategies.push_back(assignqp::Strategy::random);
        else if (name == "vector") strategies.push_back(assignqp::Strategy::vector);
        else if (name == "matrix") strategies.push_back(assignqp::Strategy::matrix);
        else {
            std::cerr << "error: unknown strategy " << name << "\n";
            return 1;
        }
    }
    std::vector<assignqp::TrainConfig> configs;
    for (const std::string& name : flags.optimizers) {
        assignqp::TrainConfig cfg;
        cfg.epochs = flags.epochs;
        cfg.batch_size = flags.batch_size;
        if (name == "sgd") {
            cfg.optimizer = assignqp::Optimizer::sgd;
            cfg.learning_rate = flags.lr_sgd;
        } else if (name == "momentum_sgd") {
            cfg.optimizer = assignqp::Optimizer::momentum_sgd;
            cfg.learning_rate = flags.lr_momentum;
        } else if (name == "adam") {
            cfg.optimizer = assignqp::Optimizer::adam;
            cfg.learning_rate = flags.lr_adam;
        } else {
            std::cerr << "error: unknown optimizer " << name << "\n";
            return 1;
        }
        configs.push_back(cfg);
    }
    std::vector<std::uint64_t> seeds;
    for (int s = 0; s < flags.seeds; ++s) seeds.push_back(flags.seed_base + s);
    std::vector<int> checkpoints = flags.checkpoints;
    if (checkpoints.empty())
        for (int q = 1; q <= 4; ++q) checkpoints.push_back(flags.epochs * q / 4);

    const assignqp::KernelMatrix kernel =
        assignqp::gaussian_kernel(assignqp::kernel_features(inst));
    assignqp::SolverConfig selection;
    selection.eta = assignqp::default_selection_eta(
        assignqp::build_mmd_problem(kernel, inst.n() / flags.batch_size).problem.A);

    const auto sink = [&](assignqp::Strategy strategy, const assignqp::TrainConfig& cfg,
                          std::uint64_t seed, const assignqp::RunMetrics& run) {
        const std::string name = std::string("metrics_") + assignqp::to_string(strategy) + "_" +
                                 assignqp::to_string(cfg.optimizer) + "_seed" +
                                 std::to_string(seed) + ".csv";
        std::ofstream out(ctx.file(name));
        out << "step,epoch,err_x,err_f\n";
        for (const assignqp::StepRecord& rec : run.steps)
            out << rec.step << ',' << rec.epoch << ',' << assignqp::format_full(rec.err_x) << ','
                << assignqp::format_full(rec.err_f) << '\n';
    };

    log_info("running " + std::to_string(strategies.size() * configs.size() * seeds.size()) +
             " training runs on n=" + std::to_string(inst.n()));
    const assignqp::SummaryTable table = assignqp::compare_strategies(
        inst, strategies, configs, seeds, checkpoints, selection, sink, threads);

    // Table-1-shaped summary: one row per optimizer x metric x checkpoint,
    // one column per strategy.
    std::ofstream summary(ctx.file("summary.csv"));
    summary << "optimizer,metric,epoch";
    for (assignqp::Strategy s : table.strategies) summary << ',' << assignqp::to_string(s);
    summary << '\n';
    json summary_doc = json::array();
    for (size_t o = 0; o < table.optimizers.size(); ++o)
        for (const char* metric : {"log10_err_x", "log10_err_f"})
            for (size_t c = 0; c < table.checkpoints.size(); ++c) {
                summary << assignqp::to_string(table.optimizers[o]) << ',' << metric << ','
                        << table.checkpoints[c];
                json row{{"optimizer", assignqp::to_string(table.optimizers[o])},
                         {"metric", metric},
                         {"epoch", table.checkpoints[c]}};
                for (size_t s = 0; s < table.strategies.size(); ++s) {
                    const assignqp::SummaryCell& cell = table.cells[s][o][c];
                    const double value = std::string(metric) == "log10_err_x"
                                             ? cell.mean_log10_err_x
                                             : cell.mean_log10_err_f;
                    summary << ',' << assignqp::format_full(value);
                    row[assignqp::to_string(table.strategies[s])] = value;
                }
                summary << '\n';
                summary_doc.push_back(row);
            }
    summary.close();

    const json result{{"n", inst.n()},
                      {"f_star", inst.f_star},
                      {"selection_eta", selection.eta},
                      {"summary", summary_doc}};
    ctx.write_json("summary.json", result);
    ctx.write_manifest();
    emit(ctx, result);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quadratic assignment solver toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string out_dir = ".";
    std::string format = "json";
    int threads = 1;
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    app.add_option("--format", format, "stdout format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--threads", threads, "worker cap for independent runs")
        ->check(CLI::PositiveNumber);

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "run the ADMM solver on a problem file");
    std::string solve_problem;
    SolverFlags solve_flags;
    solve_cmd->add_option("problem", solve_problem, "problem JSON file")->required();
    add_solver_flags(solve_cmd, solve_flags);

    // oracle
    auto* oracle_cmd = app.add_subcommand("oracle", "brute-force optimum by enumeration");
    std::string oracle_problem;
    int oracle_max_n = 16;
    std::optional<std::string> oracle_solve_output;
    oracle_cmd->add_option("problem", oracle_problem, "problem JSON file")->required();
    oracle_cmd->add_option("--max-n", oracle_max_n, "enumeration size guard");
    oracle_cmd->add_option("--solve-output", oracle_solve_output,
                           "solution.json to compute the optimality gap for");

    // thresholds
    auto* thresholds_cmd = app.add_subcommand("thresholds", "penalty thresholds for a problem");
    std::string thresholds_problem;
    double thresholds_eta = 1.0, thresholds_beta = 20.0;
    thresholds_cmd->add_option("problem", thresholds_problem, "problem JSON file")->required();
    thresholds_cmd->add_option("--eta", thresholds_eta, "eta to report the beta bound for");
    thresholds_cmd->add_option("--beta", thresholds_beta, "beta to check against eta/4");

    // mmd-select
    auto* mmd_cmd = app.add_subcommand("mmd-select", "batch selection on a dataset CSV");
    std::string mmd_dataset, mmd_strategy = "matrix";
    int mmd_m = 0;
    bool mmd_all = false;
    std::optional<double> mmd_sigma, mmd_eta;
    SolverFlags mmd_flags;
    mmd_cmd->add_option("dataset", mmd_dataset, "dataset CSV, one sample per row")->required();
    mmd_cmd->add_option("--m", mmd_m, "number of batches")->required();
    mmd_cmd->add_option("--strategy", mmd_strategy, "random, vector, or matrix")
        ->check(CLI::IsMember({"random", "vector", "matrix"}));
    mmd_cmd->add_flag("--all", mmd_all, "run all three strategies and compare");
    mmd_cmd->add_option("--sigma", mmd_sigma, "kernel bandwidth (default: median heuristic)");
    mmd_cmd->add_option("--selection-eta", mmd_eta,
                        "regularization for selection (default: scaled to the kernel)");
    mmd_cmd->add_option("--beta", mmd_flags.beta, "ADMM penalty parameter");
    mmd_cmd->add_option("--max-iter", mmd_flags.max_iter, "iteration cap");
    mmd_cmd->add_option("--seed", mmd_flags.seed, "seed for random strategy and solver start");

    // synth-bench
    auto* bench_cmd = app.add_subcommand("synth-bench", "quadratic-group training benchmark");
    BenchFlags bench;
    bench_cmd->add_option("--groups", bench.groups, "number of sample groups");
    bench_cmd->add_option("--group-size", bench.group_size, "samples per group");
    bench_cmd->add_option("--dim", bench.dim, "variable dimension");
    bench_cmd->add_option("--instance-seed", bench.instance_seed, "generator seed");
    bench_cmd->add_option("--eig-min", bench.eig_min, "lower end of the Q eigenvalue range");
    bench_cmd->add_option("--eig-max", bench.eig_max, "upper end of the Q eigenvalue range");
    bench_cmd->add_option("--center-scale", bench.center_scale, "group center spread");
    bench_cmd->add_option("--noise-scale", bench.noise_scale, "per-sample deviation");
    bench_cmd->add_option("--epochs", bench.epochs, "training epochs");
    bench_cmd->add_option("--batch-size", bench.batch_size, "mini-batch size");
    bench_cmd->add_option("--seeds", bench.seeds, "number of training seeds");
    bench_cmd->add_option("--seed-base", bench.seed_base, "first training seed");
    bench_cmd->add_option("--lr-sgd", bench.lr_sgd, "sgd learning rate");
    bench_cmd->add_option("--lr-momentum", bench.lr_momentum, "momentum sgd learning rate");
    bench_cmd->add_option("--lr-adam", bench.lr_adam, "adam learning rate");
    bench_cmd->add_option("--optimizers", bench.optimizers, "sgd, momentum_sgd, adam");
    bench_cmd->add_option("--strategies", bench.strategies, "random, vector, matrix");
    bench_cmd->add_option("--checkpoints", bench.checkpoints,
                          "summary epochs (default: quarter points)");

    CLI11_PARSE(app, argc, argv);

    OutputContext ctx;
    ctx.out_dir = out_dir;
    ctx.format = format;

    try {
        fs::create_directories(ctx.out_dir);
        if (app.got_subcommand(solve_cmd)) {
            ctx.subcommand = "solve";
            ctx.config = solve_flags.to_json();
            ctx.config["problem"] = solve_problem;
            return cmd_solve(solve_problem, solve_flags, ctx);
        }
        if (app.got_subcommand(oracle_cmd)) {
            ctx.subcommand = "oracle";
            ctx.config = json{{"problem", oracle_problem}, {"max_n", oracle_max_n}};
            if (oracle_solve_output) ctx.config["solve_output"] = *oracle_solve_output;
            return cmd_oracle(oracle_problem, oracle_max_n, oracle_solve_output, ctx);
        }
        if (app.got_subcommand(thresholds_cmd)) {
            ctx.subcommand = "thresholds";
            ctx.config = json{{"problem", thresholds_problem},
                              {"eta", thresholds_eta},
                              {"beta", thresholds_beta}};
            return cmd_thresholds(thresholds_problem, thresholds_eta, thresholds_beta, ctx);
        }
        if (app.got_subcommand(mmd_cmd)) {
            ctx.subcommand = "mmd-select";
            ctx.config = json{{"dataset", mmd_dataset},
                              {"m", mmd_m},
                              {"strategy", mmd_all ? "all" : mmd_strategy},
                              {"beta", mmd_flags.beta},
                              {"max_iter", mmd_flags.max_iter},
                              {"seed", mmd_flags.seed}};
            if (mmd_sigma) ctx.config["sigma"] = *mmd_sigma;
            if (mmd_eta) ctx.config["selection_eta"] = *mmd_eta;
            return cmd_mmd_select(mmd_dataset, mmd_m, mmd_strategy, mmd_all, mmd_sigma, mmd_eta,
                                  mmd_flags, ctx);
        }
        if (app.got_subcommand(bench_cmd)) {
            ctx.subcommand = "synth-bench";
            ctx.config = json{{"groups", bench.groups},
                              {"group_size", bench.group_size},
                              {"dim", bench.dim},
                              {"instance_seed", bench.instance_seed},
                              {"eig_min", bench.eig_min},
                              {"eig_max", bench.eig_max},
                              {"center_scale", bench.center_scale},
                              {"noise_scale", bench.noise_scale},
                              {"epochs", bench.epochs},
                              {"batch_size", bench.batch_size},
                              {"seeds", bench.seeds},
                              {"seed_base", bench.seed_base},
                              {"lr_sgd", bench.lr_sgd},
                              {"lr_momentum", bench.lr_momentum},
                              {"lr_adam", bench.lr_adam},
                              {"optimizers", bench.optimizers},
                              {"strategies", bench.strategies},
                              {"threads", threads}};
            return cmd_synth_bench(bench, threads, ctx);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
