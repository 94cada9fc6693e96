// Core model for quadratic programs over balanced assignment matrices:
//
//   min  1/2 <A, X X^T> + <G, X>
//   s.t. X binary n x m, unit row sums, column sums b = n/m
//
// together with the l_{1/2}-regularized relaxation over the transportation
// polytope and the penalty thresholds that make the relaxation exact.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace assignqp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct AssignmentProblem {
    Matrix A;  // n x n symmetric quadratic cost
    Matrix G;  // n x m linear cost
    int n = 0;
    int m = 0;

    int b() const { return m > 0 ? n / m : 0; }
};

struct ValidationIssue {
    enum class Severity { error, warning };
    Severity severity;
    std::string message;
};

struct ValidationOutcome {
    std::vector<ValidationIssue> findings;

    bool valid() const {
        for (const auto& f : findings)
            if (f.severity == ValidationIssue::Severity::error) return false;
        return true;
    }
};

// Dimension and divisibility checks are errors; a slightly indefinite A is
// only a warning since the ADMM iterations stay well-defined for any
// symmetric A.
inline ValidationOutcome validate(const AssignmentProblem& p) {
    using Severity = ValidationIssue::Severity;
    ValidationOutcome out;
    auto error = [&](std::string msg) { out.findings.push_back({Severity::error, std::move(msg)}); };
    auto warn = [&](std::string msg) { out.findings.push_back({Severity::warning, std::move(msg)}); };

    if (p.n <= 0 || p.m <= 0) {
        error("n and m must be positive");
        return out;
    }
    if (p.A.rows() != p.n || p.A.cols() != p.n)
        error("A must be " + std::to_string(p.n) + "x" + std::to_string(p.n));
    if (p.G.rows() != p.n || p.G.cols() != p.m)
        error("G must be " + std::to_string(p.n) + "x" + std::to_string(p.m));
    if (p.n % p.m != 0) error("m must divide n");
    if (!out.valid()) return out;

    const double a_norm = p.A.norm();
    const double sym_gap = (p.A - p.A.transpose()).norm();
    if (sym_gap > 1e-10 * std::max(1.0, a_norm)) {
        error("A is not symmetric: ||A - A^T||_F = " + std::to_string(sym_gap));
        return out;
    }

    Eigen::SelfAdjointEigenSolver<Matrix> eig(p.A, Eigen::EigenvaluesOnly);
    const double lambda_min = eig.eigenvalues().minCoeff();
    const double lambda_max = eig.eigenvalues().maxCoeff();
    const double spectral = std::max(std::abs(lambda_min), std::abs(lambda_max));
    if (lambda_min < -1e-8 * spectral)
        warn("A is not positive semi-definite: lambda_min = " + std::to_string(lambda_min));
    return out;
}

// Builds a problem and throws on any error-severity finding.
inline AssignmentProblem make_problem(Matrix A, Matrix G, int n, int m) {
    AssignmentProblem p{std::move(A), std::move(G), n, m};
    ValidationOutcome v = validate(p);
    for (const auto& f : v.findings)
        if (f.severity == ValidationIssue::Severity::error)
            throw std::invalid_argument("invalid problem: " + f.message);
    return p;
}

// Penalty thresholds from the exactness theory: above `concavity` the
// regularized objective is strongly concave, above `equivalence` the
// regularized and binary problems share minimizers, and above `kkt_binary`
// every KKT point is binary feasible.  ||A||_inf is the entry-wise maximum
// absolute value.
struct EtaThresholds {
    double concavity;    // 4 lambda_max(A)
    double equivalence;  // 4 max_ij |A_ij|
    double kkt_binary;   // 2/(sqrt(2)-1) sqrt(n) (||G||_F + sqrt(n) ||A||_F)
};

inline EtaThresholds eta_thresholds(const AssignmentProblem& p) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(p.A, Eigen::EigenvaluesOnly);
    const double lambda_max = eig.eigenvalues().maxCoeff();
    const double entry_max = p.A.size() > 0 ? p.A.cwiseAbs().maxCoeff() : 0.0;
    const double sqrt_n = std::sqrt(static_cast<double>(p.n));
    EtaThresholds t;
    t.concavity = 4.0 * lambda_max;
    t.equivalence = 4.0 * entry_max;
    t.kkt_binary = 2.0 / (std::sqrt(2.0) - 1.0) * sqrt_n * (p.G.norm() + sqrt_n * p.A.norm());
    return t;
}

inline void check_size(const AssignmentProblem& p, const Matrix& X, const char* name) {
    if (X.rows() != p.n || X.cols() != p.m)
        throw std::invalid_argument(std::string(name) + " must be " + std::to_string(p.n) + "x" +
                                    std::to_string(p.m));
}

// 1/2 <A, X X^T> + <G, X>
inline double objective_original(const AssignmentProblem& p, const Matrix& X) {
    check_size(p, X, "X");
    return 0.5 * (p.A * X).cwiseProduct(X).sum() + p.G.cwiseProduct(X).sum();
}

struct ObjectiveBreakdown {
    double quadratic;    // 1/2 <A, X X^T>
    double linear;       // <G, X>
    double regularizer;  // eta ||X||_{1/2}^{1/2}
    double total;
};

// The l_{1/2} quasi-norm of a matrix with entries >= 0.  Entries within
// 1e-12 below zero are clamped; anything lower is an error.
inline double half_quasi_norm(const Matrix& X) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < X.cols(); ++j)
        for (Eigen::Index i = 0; i < X.rows(); ++i) {
            const double x = X(i, j);
            if (x < -1e-12)
                throw std::domain_error("negative entry " + std::to_string(x) +
                                        " outside the regularizer domain");
            s += std::sqrt(std::max(x, 0.0));
        }
    return s;
}

inline ObjectiveBreakdown objective_regularized(const AssignmentProblem& p, const Matrix& X,
                                                double eta) {
    check_size(p, X, "X");
    if (eta < 0) throw std::invalid_argument("eta must be >= 0");
    ObjectiveBreakdown out;
    out.quadratic = 0.5 * (p.A * X).cwiseProduct(X).sum();
    out.linear = p.G.cwiseProduct(X).sum();
    out.regularizer = eta * half_quasi_norm(X);
    out.total = out.quadratic + out.linear + out.regularizer;
    return out;
}

// Augmented Lagrangian of the split problem,
//   1/2 <A, X Y^T> + <G, Y> + eta ||X||_{1/2}^{1/2}
//     + <Lambda, Y - X> + beta/2 ||Y - X||_F^2.
// The indicator terms are enforced as preconditions: X must lie in the box
// and Y must satisfy the affine row/column sums, both within 1e-8.
inline double augmented_lagrangian(const AssignmentProblem& p, const Matrix& X, const Matrix& Y,
                                   const Matrix& Lambda, double beta, double eta) {
    check_size(p, X, "X");
    check_size(p, Y, "Y");
    check_size(p, Lambda, "Lambda");
    const double box_tol = 1e-8;
    if (X.minCoeff() < -box_tol || X.maxCoeff() > 1.0 + box_tol)
        throw std::domain_error("indicator violated: X outside [0,1] box");
    const double b = static_cast<double>(p.b());
    const double affine_tol = 1e-8 * std::max(1.0, b);
    const double row_res = (Y.rowwise().sum().array() - 1.0).abs().maxCoeff();
    const double col_res = (Y.colwise().sum().array() - b).abs().maxCoeff();
    if (row_res > affine_tol || col_res > affine_tol)
        throw std::domain_error("indicator violated: Y not affine-feasible");

    const Matrix D = Y - X;
    return 0.5 * (p.A * X).cwiseProduct(Y).sum() + p.G.cwiseProduct(Y).sum() +
           eta * half_quasi_norm(X) + Lambda.cwiseProduct(D).sum() + 0.5 * beta * D.squaredNorm();
}

struct FeasibilityReport {
    double row_residual;        // ||X 1_m - 1_n||_inf
    double col_residual;        // ||1_n^T X - b 1_m^T||_inf
    double box_violation;       // max distance outside [0,1]
    double nonbinary_fraction;  // #{tol < X_ij < 1-tol} / (n m)
    bool is_assignment;
};

inline FeasibilityReport feasibility(const Matrix& X, const AssignmentProblem& p, double tol) {
    check_size(p, X, "X");
    FeasibilityReport r;
    r.row_residual = (X.rowwise().sum().array() - 1.0).abs().maxCoeff();
    r.col_residual = (X.colwise().sum().array() - static_cast<double>(p.b())).abs().maxCoeff();
    r.box_violation = std::max(0.0, std::max(-X.minCoeff(), X.maxCoeff() - 1.0));
    int nonbinary = 0;
    for (Eigen::Index j = 0; j < X.cols(); ++j)
        for (Eigen::Index i = 0; i < X.rows(); ++i)
            if (X(i, j) > tol && X(i, j) < 1.0 - tol) ++nonbinary;
    r.nonbinary_fraction = static_cast<double>(nonbinary) / static_cast<double>(p.n * p.m);
    r.is_assignment = r.row_residual <= tol && r.col_residual <= tol && r.box_violation <= tol &&
                      nonbinary == 0;
    return r;
}

// Greedy capacity-constrained rounding onto the assignment set: entries are
// taken in decreasing value (row-major order on ties) and accepted while the
// row is unassigned and the column holds fewer than b entries.
inline Matrix round_to_assignment(const Matrix& X, int b) {
    const int n = static_cast<int>(X.rows());
    const int m = static_cast<int>(X.cols());
    if (m <= 0 || b <= 0 || n != m * b)
        throw std::invalid_argument("round_to_assignment: need n = m*b");

    struct Entry {
        double value;
        int i, j;
    };
    std::vector<Entry> entries;
    entries.reserve(static_cast<size_t>(n) * m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) entries.push_back({X(i, j), i, j});
    std::sort(entries.begin(), entries.end(), [m](const Entry& a, const Entry& b2) {
        if (a.value != b2.value) return a.value > b2.value;
        return a.i * m + a.j < b2.i * m + b2.j;
    });

    Matrix out = Matrix::Zero(n, m);
    std::vector<char> row_done(n, 0);
    std::vector<int> col_count(m, 0);
    int assigned = 0;
    for (const Entry& e : entries) {
        if (assigned == n) break;
        if (row_done[e.i] || col_count[e.j] >= b) continue;
        out(e.i, e.j) = 1.0;
        row_done[e.i] = 1;
        ++col_count[e.j];
        ++assigned;
    }
    return out;
}

inline Matrix round_to_assignment(const Matrix& X, const AssignmentProblem& p) {
    check_size(p, X, "X");
    return round_to_assignment(X, p.b());
}

}  // namespace assignqp
