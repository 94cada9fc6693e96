// MMD-driven mini-batch selection: Gaussian kernel construction, the mapping
// of the batch-assignment MMD objective onto the quadratic assignment model,
// and the three selection strategies (random / vector / matrix).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "assignqp/oracle.hpp"
#include "assignqp/problem.hpp"
#include "assignqp/solver.hpp"

namespace assignqp {

struct Dataset {
    Matrix points;  // n x d, one sample per row
    int n = 0;
    int d = 0;
};

inline Dataset make_dataset(Matrix points) {
    if (points.rows() < 1 || points.cols() < 1)
        throw std::invalid_argument("dataset must contain at least one sample and dimension");
    if (!points.allFinite()) throw std::invalid_argument("dataset contains NaN or Inf");
    Dataset d;
    d.n = static_cast<int>(points.rows());
    d.d = static_cast<int>(points.cols());
    d.points = std::move(points);
    return d;
}

struct KernelMatrix {
    Matrix psi;  // n x n Gram matrix
    double bandwidth_sigma = 0.0;
    bool sigma_fallback = false;  // set when degenerate data forced sigma = 1

    int n() const { return static_cast<int>(psi.rows()); }
};

inline double median_pairwise_distance(const Dataset& data) {
    std::vector<double> dists;
    dists.reserve(static_cast<size_t>(data.n) * (data.n - 1) / 2);
    for (int i = 0; i < data.n; ++i)
        for (int j = i + 1; j < data.n; ++j)
            dists.push_back((data.points.row(i) - data.points.row(j)).norm());
    if (dists.empty()) return 0.0;
    std::sort(dists.begin(), dists.end());
    const size_t k = dists.size() / 2;
    return dists.size() % 2 == 1 ? dists[k] : 0.5 * (dists[k - 1] + dists[k]);
}

// Psi_ij = exp(-||x_i - x_j||^2 / (2 sigma^2)); sigma defaults to the median
// pairwise distance, falling back to 1 when the data are degenerate.
inline KernelMatrix gaussian_kernel(const Dataset& data, std::optional<double> sigma = {}) {
    if (data.n < 2) throw std::invalid_argument("gaussian_kernel needs at least 2 samples");
    KernelMatrix k;
    if (sigma) {
        if (!(*sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
        k.bandwidth_sigma = *sigma;
    } else {
        k.bandwidth_sigma = median_pairwise_distance(data);
        if (!(k.bandwidth_sigma > 0.0)) {
            k.bandwidth_sigma = 1.0;
            k.sigma_fallback = true;
        }
    }
    const double inv = 1.0 / (2.0 * k.bandwidth_sigma * k.bandwidth_sigma);
    k.psi = Matrix::Zero(data.n, data.n);
    for (int i = 0; i < data.n; ++i) {
        k.psi(i, i) = 1.0;
        for (int j = i + 1; j < data.n; ++j) {
            const double v = std::exp(-(data.points.row(i) - data.points.row(j)).squaredNorm() * inv);
            k.psi(i, j) = v;
            k.psi(j, i) = v;
        }
    }
    return k;
}

struct MmdProblem {
    AssignmentProblem problem;  // A = Psi/b^2, G = -2/(n b) Psi 1_{n x m}
    double constant = 0.0;      // per-batch trace term (1/n^2) 1^T Psi 1
};

// Kernel-trick instance of the assignment model.  The full batch-mean
// discrepancy is recovered as (<A, M M^T> + <G, M> + m*constant) / m; the
// solver only ever sees (A, G), and <G, X> is constant over the
// transportation polytope, so the mapping preserves minimizers.
inline MmdProblem build_mmd_problem(const KernelMatrix& kernel, int m) {
    const int n = kernel.n();
    if (m <= 0 || n % m != 0) throw std::invalid_argument("m must divide n");
    const int b = n / m;
    MmdProblem out;
    const Vector psi_row_sums = kernel.psi.rowwise().sum();
    const Vector g_col = -2.0 / (static_cast<double>(n) * b) * psi_row_sums;
    out.problem = make_problem(kernel.psi / (static_cast<double>(b) * b),
                               g_col.replicate(1, m), n, m);
    out.constant = psi_row_sums.sum() / (static_cast<double>(n) * n);
    return out;
}

inline bool is_assignment_matrix(const Matrix& M, int b) {
    std::vector<int> col_count(M.cols(), 0);
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        int row_count = 0;
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            const double v = M(i, j);
            if (v != 0.0 && v != 1.0) return false;
            if (v == 1.0) {
                ++row_count;
                ++col_count[j];
            }
        }
        if (row_count != 1) return false;
    }
    for (int c : col_count)
        if (c != b) return false;
    return true;
}

// Mean squared MMD between the m batch distributions encoded by M and the
// full sample, straight from the RKHS expansion.
inline double mmd_objective(const Matrix& M, const KernelMatrix& kernel, int b) {
    const int n = kernel.n();
    const int m = static_cast<int>(M.cols());
    if (M.rows() != n || m <= 0 || m * b != n)
        throw std::invalid_argument("mmd_objective: M must be n x m with m*b = n");
    if (!is_assignment_matrix(M, b))
        throw std::invalid_argument("mmd_objective requires M in the assignment set");

    const Vector psi_ones = kernel.psi.rowwise().sum();
    const double base = psi_ones.sum() / (static_cast<double>(n) * n);
    double total = 0.0;
    for (int j = 0; j < m; ++j) {
        const Vector col = M.col(j);
        total += col.dot(kernel.psi * col) / (static_cast<double>(b) * b) -
                 2.0 * col.dot(psi_ones) / (static_cast<double>(n) * b) + base;
    }
    return total / m;
}

// Default penalty for batch selection: 0.1x the equivalence threshold
// 4 max|A| of the built instance.  Stronger penalties binarize faster but
// steer the iterates into poor local optima of the selection objective;
// this level keeps the data term in charge while the stall exit and
// rounding cover the rare fractional finish.
inline double default_selection_eta(const Matrix& A) {
    return 0.4 * A.cwiseAbs().maxCoeff();
}

enum class Strategy { random, vector, matrix };

inline const char* to_string(Strategy s) {
    switch (s) {
        case Strategy::random: return "random";
        case Strategy::vector: return "vector";
        case Strategy::matrix: return "matrix";
    }
    return "unknown";
}

struct BatchPlan {
    Matrix M;                              // binary n x m assignment
    std::vector<std::vector<int>> batches; // m lists of b sample indices
    Strategy strategy;
    double mmd = std::numeric_limits<double>::quiet_NaN();
};

inline std::vector<std::vector<int>> batches_from_assignment(const Matrix& M) {
    std::vector<std::vector<int>> batches(M.cols());
    for (int j = 0; j < M.cols(); ++j)
        for (int i = 0; i < M.rows(); ++i)
            if (M(i, j) == 1.0) batches[j].push_back(i);
    return batches;
}

// Seeded uniform permutation chunked into m groups of b.
inline BatchPlan select_batches_random(int n, int m, int b, std::uint64_t seed) {
    if (m <= 0 || b <= 0 || n != m * b) throw std::invalid_argument("need n = m*b");
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    BatchPlan plan;
    plan.strategy = Strategy::random;
    plan.M = Matrix::Zero(n, m);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < b; ++i) plan.M(order[j * b + i], j) = 1.0;
    plan.batches = batches_from_assignment(plan.M);
    return plan;
}

// Full-matrix selection: solve the kernel-trick instance with the ADMM
// solver and read batches off the (rounded if necessary) assignment.
inline BatchPlan select_batches_matrix(const KernelMatrix& kernel, int m,
                                       const SolverConfig& config,
                                       SolveReport* report_out = nullptr) {
    const MmdProblem inst = build_mmd_problem(kernel, m);
    SolveReport report = solve(inst.problem, config);
    BatchPlan plan;
    plan.strategy = Strategy::matrix;
    plan.M = report.termination == Termination::converged_binary ? report.final_X
                                                                 : *report.rounded_X;
    plan.batches = batches_from_assignment(plan.M);
    plan.mmd = mmd_objective(plan.M, kernel, inst.problem.b());
    if (report_out) *report_out = std::move(report);
    return plan;
}

// Sequential single-column baseline: batches are chosen one at a time by
// minimizing the one-batch discrepancy against the shrinking pool, using the
// same ADMM machinery with only the column-sum constraint (the row
// constraint degenerates to the box).  The last batch is forced.
inline BatchPlan select_batches_vector(const KernelMatrix& kernel, int m, int b,
                                       const SolverConfig& config) {
    const int n = kernel.n();
    if (m <= 0 || b <= 0 || n != m * b) throw std::invalid_argument("need n = m*b");

    BatchPlan plan;
    plan.strategy = Strategy::vector;
    plan.M = Matrix::Zero(n, m);
    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);

    for (int j = 0; j < m; ++j) {
        std::vector<int> chosen;
        if (static_cast<int>(pool.size()) == b) {
            chosen = pool;
        } else {
            const int psize = static_cast<int>(pool.size());
            Matrix sub(psize, psize);
            for (int a = 0; a < psize; ++a)
                for (int c = 0; c < psize; ++c) sub(a, c) = kernel.psi(pool[a], pool[c]);
            // exact one-batch MMD mapping: 1/2 x^T Q x + g^T x + const/2
            const Matrix Q = sub / (static_cast<double>(b) * b);
            const Vector g = -sub.rowwise().sum() / (static_cast<double>(psize) * b);
            const ColumnReport col = solve_column(Q, g, b, config);

            std::vector<int> idx(psize);
            std::iota(idx.begin(), idx.end(), 0);
            std::stable_sort(idx.begin(), idx.end(),
                             [&](int a, int c) { return col.x(a) > col.x(c); });
            idx.resize(b);
            std::sort(idx.begin(), idx.end());
            for (int a : idx) chosen.push_back(pool[a]);
        }
        for (int i : chosen) plan.M(i, j) = 1.0;
        std::vector<int> remaining;
        for (int i : pool)
            if (plan.M(i, j) == 0.0) remaining.push_back(i);
        pool = std::move(remaining);
    }
    plan.batches = batches_from_assignment(plan.M);
    plan.mmd = mmd_objective(plan.M, kernel, b);
    return plan;
}

}  // namespace assignqp
