// Synthetic benchmark: K groups of quadratic functions with an analytic
// optimum, mini-batch training under each batch-selection strategy, and the
// checkpointed error summary.

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <future>
#include <random>
#include <stdexcept>
#include <vector>

#include "assignqp/mmd.hpp"
#include "assignqp/problem.hpp"
#include "assignqp/solver.hpp"

namespace assignqp {

struct SyntheticSpec {
    int groups = 4;                // K
    std::vector<int> group_sizes;  // N_i; empty means `groups` equal groups of `group_size`
    int group_size = 20;
    int dim = 8;
    std::uint64_t seed = 1;
    double eig_min = 0.8;  // conditioning range for the Q eigenvalues
    double eig_max = 1.25;
    double center_scale = 3.0;  // spread of the per-group linear-term centers
    double noise_scale = 0.3;   // per-sample deviation from the group center

    std::vector<int> resolved_sizes() const {
        if (!group_sizes.empty()) return group_sizes;
        return std::vector<int>(groups, group_size);
    }
    int total() const {
        int n = 0;
        for (int s : resolved_sizes()) n += s;
        return n;
    }
};

struct QuadraticInstance {
    std::vector<Matrix> Q;  // one SPD d x d matrix per sample
    std::vector<Vector> g;  // one d-vector per sample
    int dim = 0;
    Vector x_star;
    double f_star = 0.0;

    int n() const { return static_cast<int>(Q.size()); }

    double objective(const Vector& x) const {
        double f = 0.0;
        for (int s = 0; s < n(); ++s) f += 0.5 * x.dot(Q[s] * x) + g[s].dot(x);
        return f;
    }

    Vector full_gradient(const Vector& x) const {
        Vector grad = Vector::Zero(dim);
        for (int s = 0; s < n(); ++s) grad += Q[s] * x + g[s];
        return grad;
    }

    Vector batch_gradient(const Vector& x, const std::vector<int>& batch) const {
        Vector grad = Vector::Zero(dim);
        for (int s : batch) grad += Q[s] * x + g[s];
        return grad / static_cast<double>(batch.size());
    }
};

// x* = -(sum Q)^{-1} (sum g), f* = 1/2 x*^T (sum Q) x* + (sum g)^T x*.
inline QuadraticInstance make_instance(std::vector<Matrix> Q, std::vector<Vector> g) {
    if (Q.empty() || Q.size() != g.size()) throw std::invalid_argument("need matching Q and g");
    QuadraticInstance inst;
    inst.dim = static_cast<int>(Q[0].rows());
    inst.Q = std::move(Q);
    inst.g = std::move(g);
    Matrix q_sum = Matrix::Zero(inst.dim, inst.dim);
    Vector g_sum = Vector::Zero(inst.dim);
    for (int s = 0; s < inst.n(); ++s) {
        q_sum += inst.Q[s];
        g_sum += inst.g[s];
    }
    inst.x_star = q_sum.ldlt().solve(-g_sum);
    inst.f_star = 0.5 * inst.x_star.dot(q_sum * inst.x_star) + g_sum.dot(inst.x_star);
    return inst;
}

namespace detail {

// Random orthogonal basis from the QR of a Gaussian matrix, sign-fixed so
// the draw is deterministic.
inline Matrix random_orthogonal(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix Z(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) Z(i, j) = normal(rng);
    Eigen::HouseholderQR<Matrix> qr(Z);
    Matrix O = qr.householderQ();
    const Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < d; ++j)
        if (R(j, j) < 0) O.col(j) = -O.col(j);
    return O;
}

}  // namespace detail

// Seeded instance: each Q is rebuilt from a random orthogonal basis with
// eigenvalues uniform in the conditioning range; each g is its group's
// center plus noise, which is what gives the groups their identity in
// feature space.
inline QuadraticInstance generate_synthetic(const SyntheticSpec& spec) {
    const std::vector<int> sizes = spec.resolved_sizes();
    if (sizes.empty() || spec.dim < 1) throw std::invalid_argument("invalid synthetic spec");
    for (int s : sizes)
        if (s < 1) throw std::invalid_argument("group sizes must be >= 1");
    if (!(spec.eig_min > 0.0) || spec.eig_max < spec.eig_min)
        throw std::invalid_argument("need 0 < eig_min <= eig_max");

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> eig(spec.eig_min, spec.eig_max);

    std::vector<Matrix> Q;
    std::vector<Vector> g;
    for (int group = 0; group < static_cast<int>(sizes.size()); ++group) {
        Vector center(spec.dim);
        for (int k = 0; k < spec.dim; ++k) center(k) = spec.center_scale * normal(rng);
        for (int sample = 0; sample < sizes[group]; ++sample) {
            const Matrix O = detail::random_orthogonal(spec.dim, rng);
            Vector eigs(spec.dim);
            for (int k = 0; k < spec.dim; ++k) eigs(k) = eig(rng);
            Q.push_back(O * eigs.asDiagonal() * O.transpose());
            Vector gs(spec.dim);
            for (int k = 0; k < spec.dim; ++k) gs(k) = center(k) + spec.noise_scale * normal(rng);
            g.push_back(std::move(gs));
        }
    }
    return make_instance(std::move(Q), std::move(g));
}

// One feature vector -Q^{-1} g per sample, flattened over groups in order.
inline Dataset kernel_features(const QuadraticInstance& inst) {
    Matrix points(inst.n(), inst.dim);
    for (int s = 0; s < inst.n(); ++s)
        points.row(s) = inst.Q[s].ldlt().solve(-inst.g[s]).transpose();
    return make_dataset(std::move(points));
}

enum class Optimizer { sgd, momentum_sgd, adam };

inline const char* to_string(Optimizer o) {
    switch (o) {
        case Optimizer::sgd: return "sgd";
        case Optimizer::momentum_sgd: return "momentum_sgd";
        case Optimizer::adam: return "adam";
    }
    return "unknown";
}

struct TrainConfig {
    Optimizer optimizer = Optimizer::sgd;
    double learning_rate = 0.05;  // default for sgd / momentum; use 1e-3 for adam
    double momentum = 0.9;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    int epochs = 400;
    int batch_size = 4;
    std::uint64_t seed = 1;
};

struct StepRecord {
    int step;
    int epoch;
    double err_x;  // ||x - x*||^2
    double err_f;  // (f(x) - f*)^2
};

struct RunMetrics {
    std::vector<StepRecord> steps;
    std::vector<StepRecord> epoch_end;
    double final_log10_err_x = 0.0;
    double final_log10_err_f = 0.0;
    bool diverged = false;
};

struct PlanSource {
    Strategy strategy = Strategy::random;
    BatchPlan fixed_plan;  // used for vector / matrix
};

inline double safe_log10(double v) { return std::log10(std::max(v, 1e-300)); }

// Seeded mini-batch training.  The random strategy reshuffles every epoch;
// vector/matrix plans are fixed, since selection is computed once from the
// kernel.  Batches run in plan order, gradients are per-batch means, and the
// start point is a seeded standard-normal draw.
inline RunMetrics run_training(const QuadraticInstance& inst, const PlanSource& plans,
                               const TrainConfig& cfg) {
    const int n = inst.n();
    if (cfg.batch_size < 1 || n % cfg.batch_size != 0)
        throw std::invalid_argument("batch_size must divide n");
    if (cfg.epochs < 1 || !(cfg.learning_rate > 0.0))
        throw std::invalid_argument("need epochs >= 1 and learning_rate > 0");
    const int m = n / cfg.batch_size;
    if (plans.strategy != Strategy::random &&
        (plans.fixed_plan.M.rows() != n || plans.fixed_plan.M.cols() != m))
        throw std::invalid_argument("fixed plan does not match n and batch_size");

    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector x(inst.dim);
    for (int k = 0; k < inst.dim; ++k) x(k) = normal(rng);

    Vector velocity = Vector::Zero(inst.dim);
    Vector adam_m = Vector::Zero(inst.dim);
    Vector adam_v = Vector::Zero(inst.dim);
    int adam_t = 0;

    RunMetrics metrics;
    metrics.steps.reserve(static_cast<size_t>(cfg.epochs) * m);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);

    int step_counter = 0;
    for (int epoch = 1; epoch <= cfg.epochs && !metrics.diverged; ++epoch) {
        std::vector<std::vector<int>> batches;
        if (plans.strategy == Strategy::random) {
            std::shuffle(order.begin(), order.end(), rng);
            batches.resize(m);
            for (int j = 0; j < m; ++j)
                batches[j].assign(order.begin() + j * cfg.batch_size,
                                  order.begin() + (j + 1) * cfg.batch_size);
        } else {
            batches = plans.fixed_plan.batches;
        }

        for (int j = 0; j < m; ++j) {
            const Vector grad = inst.batch_gradient(x, batches[j]);
            switch (cfg.optimizer) {
                case Optimizer::sgd:
                    x -= cfg.learning_rate * grad;
                    break;
                case Optimizer::momentum_sgd:
                    velocity = cfg.momentum * velocity + grad;
                    x -= cfg.learning_rate * velocity;
                    break;
                case Optimizer::adam: {
                    ++adam_t;
                    adam_m = cfg.adam_beta1 * adam_m + (1.0 - cfg.adam_beta1) * grad;
                    adam_v = cfg.adam_beta2 * adam_v +
                             (1.0 - cfg.adam_beta2) * grad.cwiseProduct(grad).eval();
                    const Vector m_hat = adam_m / (1.0 - std::pow(cfg.adam_beta1, adam_t));
                    const Vector v_hat = adam_v / (1.0 - std::pow(cfg.adam_beta2, adam_t));
                    x -= cfg.learning_rate *
                         (m_hat.array() / (v_hat.array().sqrt() + cfg.adam_eps)).matrix();
                    break;
                }
            }
            ++step_counter;
            StepRecord rec;
            rec.step = step_counter;
            rec.epoch = epoch;
            rec.err_x = (x - inst.x_star).squaredNorm();
            const double df = inst.objective(x) - inst.f_star;
            rec.err_f = df * df;
            metrics.steps.push_back(rec);
            if (rec.err_f > 1e12) {
                metrics.diverged = true;
                break;
            }
        }
        if (!metrics.steps.empty()) metrics.epoch_end.push_back(metrics.steps.back());
    }

    if (!metrics.steps.empty()) {
        metrics.final_log10_err_x = safe_log10(metrics.steps.back().err_x);
        metrics.final_log10_err_f = safe_log10(metrics.steps.back().err_f);
    }
    return metrics;
}

struct SummaryCell {
    double mean_log10_err_x = 0.0;
    double mean_log10_err_f = 0.0;
};

struct SummaryTable {
    std::vector<int> checkpoints;
    std::vector<Strategy> strategies;
    std::vector<Optimizer> optimizers;
    // cells[strategy][optimizer][checkpoint]
    std::vector<std::vector<std::vector<SummaryCell>>> cells;
};

// Observer for individual training runs (metrics export and the like),
// always invoked on the calling thread in deterministic order.
using RunSink = std::function<void(Strategy, const TrainConfig&, std::uint64_t seed,
                                   const RunMetrics&)>;

// Mean log10 errors at the checkpoint epochs, averaged over seeds, for each
// strategy x optimizer pair.  One TrainConfig per optimizer column (each
// carries its own learning rate).  Vector and matrix plans are built once
// from the instance's kernel features; the per-seed variation enters through
// the training start point (and, for random, the per-epoch shuffles).
// Independent runs may execute on up to `threads` workers; results join in
// a fixed order, so the output is identical for any thread count.
inline SummaryTable compare_strategies(const QuadraticInstance& inst,
                                       const std::vector<Strategy>& strategies,
                                       const std::vector<TrainConfig>& configs,
                                       const std::vector<std::uint64_t>& seeds,
                                       const std::vector<int>& checkpoints,
                                       const SolverConfig& selection_config = {},
                                       const RunSink& sink = {}, int threads = 1) {
    if (strategies.empty() || configs.empty() || seeds.empty() || checkpoints.empty())
        throw std::invalid_argument("compare_strategies: empty inputs");
    const int batch_size = configs.front().batch_size;
    for (const TrainConfig& c : configs) {
        if (c.batch_size != batch_size)
            throw std::invalid_argument("all configs must share one batch_size");
        for (int cp : checkpoints)
            if (cp < 1 || cp > c.epochs) throw std::invalid_argument("checkpoint out of range");
    }

    const int n = inst.n();
    const int m = n / batch_size;
    const KernelMatrix kernel = gaussian_kernel(kernel_features(inst));

    std::vector<PlanSource> sources(strategies.size());
    for (size_t s = 0; s < strategies.size(); ++s) {
        sources[s].strategy = strategies[s];
        if (strategies[s] == Strategy::matrix)
            sources[s].fixed_plan = select_batches_matrix(kernel, m, selection_config);
        else if (strategies[s] == Strategy::vector)
            sources[s].fixed_plan = select_batches_vector(kernel, m, batch_size,
                                                          selection_config);
    }

    struct Job {
        size_t s, o;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (size_t s = 0; s < strategies.size(); ++s)
        for (size_t o = 0; o < configs.size(); ++o)
            for (std::uint64_t seed : seeds) jobs.push_back({s, o, seed});

    std::vector<RunMetrics> results(jobs.size());
    const auto run_job = [&](const Job& job) {
        TrainConfig cfg = configs[job.o];
        cfg.seed = job.seed;
        return run_training(inst, sources[job.s], cfg);
    };
    if (threads <= 1) {
        for (size_t j = 0; j < jobs.size(); ++j) results[j] = run_job(jobs[j]);
    } else {
        for (size_t base = 0; base < jobs.size(); base += static_cast<size_t>(threads)) {
            const size_t end = std::min(jobs.size(), base + static_cast<size_t>(threads));
            std::vector<std::future<RunMetrics>> batch;
            for (size_t j = base; j < end; ++j)
                batch.push_back(std::async(std::launch::async, run_job, jobs[j]));
            for (size_t j = base; j < end; ++j) results[j] = batch[j - base].get();
        }
    }

    SummaryTable table;
    table.checkpoints = checkpoints;
    table.strategies = strategies;
    for (const TrainConfig& c : configs) table.optimizers.push_back(c.optimizer);
    table.cells.assign(strategies.size(),
                       std::vector<std::vector<SummaryCell>>(
                           configs.size(), std::vector<SummaryCell>(checkpoints.size())));

    for (size_t j = 0; j < jobs.size(); ++j) {
        const Job& job = jobs[j];
        if (sink) {
            TrainConfig cfg = configs[job.o];
            cfg.seed = job.seed;
            sink(strategies[job.s], cfg, job.seed, results[j]);
        }
        if (results[j].diverged)
            throw std::runtime_error(std::string("training run diverged: strategy ") +
                                     to_string(strategies[job.s]) + ", optimizer " +
                                     to_string(configs[job.o].optimizer) + ", seed " +
                                     std::to_string(job.seed));
        for (size_t c = 0; c < checkpoints.size(); ++c) {
            const StepRecord& rec = results[j].epoch_end.at(checkpoints[c] - 1);
            table.cells[job.s][job.o][c].mean_log10_err_x += safe_log10(rec.err_x);
            table.cells[job.s][job.o][c].mean_log10_err_f += safe_log10(rec.err_f);
        }
    }
    for (auto& per_strategy : table.cells)
        for (auto& per_optimizer : per_strategy)
            for (SummaryCell& cell : per_optimizer) {
                cell.mean_log10_err_x /= static_cast<double>(seeds.size());
                cell.mean_log10_err_f /= static_cast<double>(seeds.size());
            }
    return table;
}

}  // namespace assignqp
