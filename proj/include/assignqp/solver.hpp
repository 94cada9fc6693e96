// ADMM for the split l_{1/2}-regularized assignment relaxation.  Each
// iteration solves the X subproblem entry-wise by the scalar prox, the Y
// subproblem by a closed-form affine projection, then ascends the dual:
//
//   R = Y + (Lambda - 1/2 A Y) / beta,     X_ij = prox(R_ij)
//   B = X - (Lambda + 1/2 A X + G) / beta, Y = proj_affine(B)
//   Lambda += beta (Y - X)
//
// with residuals h = ||(1/2 A - beta I)(Y - Y_prev)||_F and
// p = beta ||Y - X||_F.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "assignqp/problem.hpp"
#include "assignqp/prox.hpp"

namespace assignqp {

enum class InitMode { uniform, random_feasible, given };

// Defaults mirror the reference figure settings (beta=20, eta=1).  The
// default start is a seeded random feasible point: the uniform start sits on
// an exact symmetry of near-symmetric instances (all prox inputs identical),
// which locks the iteration into a period-2 cycle instead of terminating.
struct SolverConfig {
    double beta = 20.0;
    double eta = 1.0;
    double eps_kkt = 1e-6;     // threshold on h
    double eps_primal = 1e-6;  // threshold on p
    double binary_tol = 1e-9;  // entry-wise binariness test
    int max_iter = 20000;
    InitMode init = InitMode::random_feasible;
    std::uint64_t seed = 42;
    Matrix X0, Y0;  // used when init == given
};

inline ValidationOutcome validate(const SolverConfig& c) {
    using Severity = ValidationIssue::Severity;
    ValidationOutcome out;
    if (!(c.beta > 0)) out.findings.push_back({Severity::error, "beta must be > 0"});
    if (!(c.eps_kkt > 0)) out.findings.push_back({Severity::error, "eps_kkt must be > 0"});
    if (!(c.eps_primal > 0)) out.findings.push_back({Severity::error, "eps_primal must be > 0"});
    if (c.eta < 0) out.findings.push_back({Severity::error, "eta must be >= 0"});
    if (c.max_iter < 1) out.findings.push_back({Severity::error, "max_iter must be >= 1"});
    if (c.beta <= c.eta / 4.0)
        out.findings.push_back(
            {Severity::warning,
             "beta <= eta/4: the finite-termination bound beta > eta/4 does not hold"});
    return out;
}

struct IterateState {
    Matrix X, Y, Lambda;
    int k = 0;
};

struct IterationRecord {
    int k;
    double h;  // KKT residual
    double p;  // primal residual
    double lagrangian;
    double nonbinary_fraction;
    double lambda_norm;
    double objective_original;
};

enum class Termination { converged_binary, converged_nonbinary, max_iter };

inline const char* to_string(Termination t) {
    switch (t) {
        case Termination::converged_binary: return "converged_binary";
        case Termination::converged_nonbinary: return "converged_nonbinary";
        case Termination::max_iter: return "max_iter";
    }
    return "unknown";
}

struct SolveReport {
    Matrix final_X, final_Y, final_Lambda;
    Termination termination;
    int iterations = 0;
    std::vector<IterationRecord> trace;
    std::optional<Matrix> rounded_X;  // present when termination != converged_binary
};

// Closed-form projection of B onto {Y : Y 1_m = 1_n, 1_n^T Y = b 1_m^T};
// the column-sum target b = n/m is implied by the dimensions.
inline Matrix project_transportation_affine(const Matrix& B) {
    const auto n = B.rows();
    const auto m = B.cols();
    const Eigen::RowVectorXd col_sums = B.colwise().sum();
    const Vector row_sums = B.rowwise().sum();
    const double total = col_sums.sum();

    Matrix Y = B;
    Y.rowwise() -= col_sums / static_cast<double>(n);
    const Vector v =
        (Vector::Ones(n) - row_sums + Vector::Constant(n, total / static_cast<double>(n))) /
        static_cast<double>(m);
    Y.colwise() += v;
    return Y;
}

inline void throw_on_nan(const Matrix& M, const char* stage) {
    if (!M.allFinite())
        throw std::runtime_error(std::string("non-finite value produced by ") + stage);
}

inline IterateState init_state(const AssignmentProblem& p, const SolverConfig& cfg) {
    IterateState s;
    s.Lambda = Matrix::Zero(p.n, p.m);
    s.k = 0;
    switch (cfg.init) {
        case InitMode::uniform:
            s.X = Matrix::Constant(p.n, p.m, 1.0 / p.m);
            s.Y = s.X;
            break;
        case InitMode::random_feasible: {
            std::mt19937_64 rng(cfg.seed);
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            Matrix M(p.n, p.m);
            for (Eigen::Index i = 0; i < M.rows(); ++i)
                for (Eigen::Index j = 0; j < M.cols(); ++j) M(i, j) = unif(rng);
            s.Y = project_transportation_affine(M);
            s.X = s.Y.cwiseMax(0.0).cwiseMin(1.0);
            break;
        }
        case InitMode::given:
            if (cfg.X0.rows() != p.n || cfg.X0.cols() != p.m || cfg.Y0.rows() != p.n ||
                cfg.Y0.cols() != p.m)
                throw std::invalid_argument("init=given requires X0 and Y0 of size n x m");
            s.X = cfg.X0.cwiseMax(0.0).cwiseMin(1.0);
            s.Y = project_transportation_affine(cfg.Y0);
            break;
    }
    return s;
}

// Exact solution of the X subproblem with Y^{k-1}, Lambda^{k-1} fixed.
inline Matrix x_update(const IterateState& s, const AssignmentProblem& p, const SolverConfig& cfg) {
    const Matrix R = s.Y + (s.Lambda - 0.5 * (p.A * s.Y)) / cfg.beta;
    Matrix X(p.n, p.m);
    for (Eigen::Index j = 0; j < X.cols(); ++j)
        for (Eigen::Index i = 0; i < X.rows(); ++i)
            X(i, j) = scalar_prox(R(i, j), cfg.beta, cfg.eta);
    return X;
}

// Exact solution of the Y subproblem with X^k, Lambda^{k-1} fixed.
inline Matrix y_update(const IterateState& s, const AssignmentProblem& p, const SolverConfig& cfg) {
    const Matrix B = s.X - (s.Lambda + 0.5 * (p.A * s.X) + p.G) / cfg.beta;
    return project_transportation_affine(B);
}

inline Matrix dual_update(const IterateState& s, double beta) {
    return s.Lambda + beta * (s.Y - s.X);
}

// (h, p) of the stopping test: h measures stationarity drift between
// consecutive Y iterates, p the split-constraint violation.
inline std::pair<double, double> residuals(const Matrix& prev_Y, const IterateState& s,
                                           const AssignmentProblem& p, double beta) {
    const Matrix D = s.Y - prev_Y;
    const double h = (0.5 * (p.A * D) - beta * D).norm();
    const double pr = beta * (s.Y - s.X).norm();
    return {h, pr};
}

inline double nonbinary_fraction(const Matrix& X, double tol) {
    int nonbinary = 0;
    for (Eigen::Index j = 0; j < X.cols(); ++j)
        for (Eigen::Index i = 0; i < X.rows(); ++i)
            if (X(i, j) > tol && X(i, j) < 1.0 - tol) ++nonbinary;
    return static_cast<double>(nonbinary) / static_cast<double>(X.size());
}

inline std::pair<IterateState, IterationRecord> step(IterateState s, const AssignmentProblem& p,
                                                     const SolverConfig& cfg) {
    const Matrix prev_Y = s.Y;
    s.X = x_update(s, p, cfg);
    throw_on_nan(s.X, "x_update");
    s.Y = y_update(s, p, cfg);
    throw_on_nan(s.Y, "y_update");
    s.Lambda = dual_update(s, cfg.beta);
    throw_on_nan(s.Lambda, "dual_update");
    s.k += 1;

    const auto [h, pr] = residuals(prev_Y, s, p, cfg.beta);
    IterationRecord rec;
    rec.k = s.k;
    rec.h = h;
    rec.p = pr;
    rec.lagrangian = augmented_lagrangian(p, s.X, s.Y, s.Lambda, cfg.beta, cfg.eta);
    rec.nonbinary_fraction = nonbinary_fraction(s.X, cfg.binary_tol);
    rec.lambda_norm = s.Lambda.norm();
    rec.objective_original = objective_original(p, s.X);
    return {std::move(s), rec};
}

inline Matrix snap_binary(Matrix X, double tol) {
    for (Eigen::Index j = 0; j < X.cols(); ++j)
        for (Eigen::Index i = 0; i < X.rows(); ++i) {
            if (std::abs(X(i, j)) <= tol) X(i, j) = 0.0;
            else if (std::abs(X(i, j) - 1.0) <= tol) X(i, j) = 1.0;
        }
    return X;
}

// Runs the full loop.  Exits converged_binary once both residuals are below
// threshold with no fractional entries; exits converged_nonbinary after 50
// consecutive residual-converged checks that still carry fractional entries
// (the finite-termination guarantee only applies above the eta thresholds,
// and callers may run below them); otherwise max_iter.
inline SolveReport solve(const AssignmentProblem& p, const SolverConfig& cfg) {
    for (const auto& f : validate(cfg).findings)
        if (f.severity == ValidationIssue::Severity::error)
            throw std::invalid_argument("invalid config: " + f.message);

    constexpr int kNonbinaryStallExit = 50;
    IterateState state = init_state(p, cfg);
    SolveReport report;
    report.trace.reserve(std::min(cfg.max_iter, 4096));
    report.termination = Termination::max_iter;

    int stall = 0;
    for (int k = 1; k <= cfg.max_iter; ++k) {
        auto [next, rec] = step(std::move(state), p, cfg);
        state = std::move(next);
        report.trace.push_back(rec);
        if (rec.h <= cfg.eps_kkt && rec.p <= cfg.eps_primal) {
            if (rec.nonbinary_fraction == 0.0) {
                report.termination = Termination::converged_binary;
                break;
            }
            if (++stall >= kNonbinaryStallExit) {
                report.termination = Termination::converged_nonbinary;
                break;
            }
        } else {
            stall = 0;
        }
    }

    report.iterations = state.k;
    report.final_X = snap_binary(state.X, cfg.binary_tol);
    report.final_Y = state.Y;
    report.final_Lambda = state.Lambda;
    if (report.termination != Termination::converged_binary)
        report.rounded_X =
            round_to_assignment(report.final_X.cwiseMax(0.0).cwiseMin(1.0), p.b());
    return report;
}

struct MonitorReport {
    double max_lambda_norm = 0.0;
    double lambda_last_quarter_range = 0.0;
    double lambda_last_quarter_level = 0.0;
    bool lambda_plateau = false;
    double largest_lagrangian_jump = 0.0;      // most positive L difference after iteration 5
    double descent_violation_fraction = 0.0;   // fraction of increases beyond 1e-8 after iteration 5
    std::optional<int> first_binary_iteration;
};

// Boundedness, descent, and finite-termination evidence from a completed
// trace, mirroring the quantities the convergence theory tracks.
inline MonitorReport theory_monitors(const std::vector<IterationRecord>& trace,
                                     const AssignmentProblem&, const SolverConfig&) {
    MonitorReport r;
    if (trace.empty()) return r;

    for (const auto& rec : trace) {
        r.max_lambda_norm = std::max(r.max_lambda_norm, rec.lambda_norm);
        if (!r.first_binary_iteration && rec.nonbinary_fraction == 0.0)
            r.first_binary_iteration = rec.k;
    }

    const size_t start = trace.size() - (trace.size() + 3) / 4;
    double lo = trace[start].lambda_norm, hi = trace[start].lambda_norm;
    for (size_t i = start; i < trace.size(); ++i) {
        lo = std::min(lo, trace[i].lambda_norm);
        hi = std::max(hi, trace[i].lambda_norm);
    }
    r.lambda_last_quarter_range = hi - lo;
    r.lambda_last_quarter_level = hi;
    r.lambda_plateau = r.lambda_last_quarter_range <= 0.01 * r.lambda_last_quarter_level + 1e-12;

    const double slack = 1e-8;
    int increases = 0, steps = 0;
    for (size_t i = 1; i < trace.size(); ++i) {
        if (trace[i].k <= 5) continue;
        const double jump = trace[i].lagrangian - trace[i - 1].lagrangian;
        r.largest_lagrangian_jump = std::max(r.largest_lagrangian_jump, jump);
        ++steps;
        if (jump > slack) ++increases;
    }
    if (steps > 0)
        r.descent_violation_fraction = static_cast<double>(increases) / static_cast<double>(steps);
    return r;
}

// Single-column variant used by the sequential batch-selection baseline:
//   min 1/2 x^T Q x + g^T x + eta ||x||_{1/2}^{1/2}
//   s.t. 0 <= x <= 1, 1^T x = target_sum.
// Same update structure; the affine projection reduces to a mean shift.
struct ColumnReport {
    Vector x;
    Termination termination;
    int iterations = 0;
};

inline ColumnReport solve_column(const Matrix& Q, const Vector& g, int target_sum,
                                 const SolverConfig& cfg) {
    const auto p = Q.rows();
    if (Q.cols() != p || g.size() != p) throw std::invalid_argument("solve_column: bad sizes");
    if (target_sum < 0 || target_sum > p) throw std::invalid_argument("solve_column: bad target");

    constexpr int kNonbinaryStallExit = 50;
    const double target = static_cast<double>(target_sum);
    const auto project_sum = [&](const Vector& v) {
        return Vector((v.array() + (target - v.sum()) / static_cast<double>(p)).matrix());
    };

    // seeded random feasible start, same rationale as the matrix solver
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Vector y(p);
    for (Eigen::Index i = 0; i < p; ++i) y(i) = unif(rng);
    y = project_sum(y);
    Vector x = y.cwiseMax(0.0).cwiseMin(1.0);
    Vector lambda = Vector::Zero(p);

    ColumnReport report;
    report.termination = Termination::max_iter;
    int stall = 0;
    for (int k = 1; k <= cfg.max_iter; ++k) {
        const Vector prev_y = y;
        const Vector r = y + (lambda - 0.5 * (Q * y)) / cfg.beta;
        for (Eigen::Index i = 0; i < p; ++i) x(i) = scalar_prox(r(i), cfg.beta, cfg.eta);
        const Vector bvec = x - (lambda + 0.5 * (Q * x) + g) / cfg.beta;
        y = project_sum(bvec);
        lambda += cfg.beta * (y - x);
        if (!x.allFinite() || !y.allFinite() || !lambda.allFinite())
            throw std::runtime_error("non-finite value in solve_column");
        report.iterations = k;

        const Vector d = y - prev_y;
        const double h = (0.5 * (Q * d) - cfg.beta * d).norm();
        const double pr = cfg.beta * (y - x).norm();
        int nonbinary = 0;
        for (Eigen::Index i = 0; i < p; ++i)
            if (x(i) > cfg.binary_tol && x(i) < 1.0 - cfg.binary_tol) ++nonbinary;
        if (h <= cfg.eps_kkt && pr <= cfg.eps_primal) {
            if (nonbinary == 0) {
                report.termination = Termination::converged_binary;
                break;
            }
            if (++stall >= kNonbinaryStallExit) {
                report.termination = Termination::converged_nonbinary;
                break;
            }
        } else {
            stall = 0;
        }
    }

    for (Eigen::Index i = 0; i < p; ++i) {
        if (std::abs(x(i)) <= cfg.binary_tol) x(i) = 0.0;
        else if (std::abs(x(i) - 1.0) <= cfg.binary_tol) x(i) = 1.0;
    }
    report.x = std::move(x);
    return report;
}

}  // namespace assignqp
