// Ground-truth machinery: exhaustive enumeration of the assignment set,
// brute-force global optimum, a 2x2 exchange local-optimality certificate,
// an independent normal-equations projection, and numerical KKT residuals.

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "assignqp/problem.hpp"

namespace assignqp {

// |F_1| = n! / (b!)^m, computed in log space.
inline double assignment_count(int n, int m, int b) {
    const double log_count = std::lgamma(n + 1.0) - m * std::lgamma(b + 1.0);
    return std::round(std::exp(log_count));
}

// Streams every binary assignment matrix exactly once, in lexicographic
// order of the row-to-column membership vector.  Guarded at n <= max_n
// against combinatorial blow-up.
class EnumerationCursor {
  public:
    EnumerationCursor(int n, int m, int b, int max_n = 16) : n_(n), m_(m), b_(b) {
        if (m <= 0 || b <= 0 || n != m * b)
            throw std::invalid_argument("enumeration requires n = m*b with m, b >= 1");
        if (n > max_n)
            throw std::domain_error("refusing to enumerate n=" + std::to_string(n) + " > " +
                                    std::to_string(max_n) + " (about " +
                                    std::to_string(assignment_count(n, m, b)) + " assignments)");
        assignment_.resize(n);
        for (int i = 0; i < n; ++i) assignment_[i] = i / b;
    }

    bool exhausted() const { return exhausted_; }

    // Column index per row for the current assignment.
    const std::vector<int>& assignment() const { return assignment_; }

    Matrix current() const {
        Matrix X = Matrix::Zero(n_, m_);
        for (int i = 0; i < n_; ++i) X(i, assignment_[i]) = 1.0;
        return X;
    }

    // Advances to the next assignment; returns false once the sequence wraps.
    bool advance() {
        if (!std::next_permutation(assignment_.begin(), assignment_.end())) {
            exhausted_ = true;
            return false;
        }
        return true;
    }

  private:
    int n_, m_, b_;
    std::vector<int> assignment_;
    bool exhausted_ = false;
};

inline std::vector<Matrix> enumerate_assignments(int n, int m, int b, int max_n = 16) {
    std::vector<Matrix> all;
    EnumerationCursor cursor(n, m, b, max_n);
    do {
        all.push_back(cursor.current());
    } while (cursor.advance());
    return all;
}

// Global minimizer of the original objective over the assignment set; ties
// resolve to the first matrix in enumeration order.
inline std::pair<Matrix, double> brute_force_solve(const AssignmentProblem& p, int max_n = 16) {
    EnumerationCursor cursor(p.n, p.m, p.b(), max_n);
    Matrix best = cursor.current();
    double best_value = objective_original(p, best);
    while (cursor.advance()) {
        const Matrix X = cursor.current();
        const double value = objective_original(p, X);
        if (value < best_value) {
            best_value = value;
            best = X;
        }
    }
    return {best, best_value};
}

// True iff no exchange of two rows' columns (the minimal transportation
// cycle) strictly lowers the objective.  A swap counts as improving only
// beyond a small relative slack so floating-point ties do not flip the
// verdict.
inline bool swap_local_opt_check(const Matrix& X, const AssignmentProblem& p) {
    check_size(p, X, "X");
    if (!feasibility(X, p, 0.0).is_assignment)
        throw std::invalid_argument("swap_local_opt_check requires X in the assignment set");

    std::vector<int> col(p.n);
    for (int i = 0; i < p.n; ++i)
        for (int j = 0; j < p.m; ++j)
            if (X(i, j) == 1.0) col[i] = j;

    const double base = objective_original(p, X);
    const double slack = 1e-9 * std::max(1.0, std::abs(base));
    for (int i1 = 0; i1 < p.n; ++i1)
        for (int i2 = i1 + 1; i2 < p.n; ++i2) {
            if (col[i1] == col[i2]) continue;
            Matrix swapped = X;
            swapped(i1, col[i1]) = 0.0;
            swapped(i2, col[i2]) = 0.0;
            swapped(i1, col[i2]) = 1.0;
            swapped(i2, col[i1]) = 1.0;
            if (objective_original(p, swapped) < base - slack) return false;
        }
    return true;
}

// Reference projection onto {Y : Y 1_m = 1_n, 1_n^T Y = b 1_m^T} via the
// (n+m)-dimensional multiplier system Y = B + nu 1^T + 1 mu^T.  The
// constraint set has rank deficiency 1, so the last column equation is
// dropped and the remaining system solved in the minimum-norm sense.
inline Matrix projection_normal_equations(const Matrix& B, int n, int m, int b) {
    if (B.rows() != n || B.cols() != m)
        throw std::invalid_argument("projection_normal_equations: B must be n x m");
    const int rows = n + m - 1;
    const int cols = n + m;
    Matrix K = Matrix::Zero(rows, cols);
    Vector rhs(rows);
    const Vector row_sums = B.rowwise().sum();
    const Eigen::RowVectorXd col_sums = B.colwise().sum();
    for (int i = 0; i < n; ++i) {
        K(i, i) = static_cast<double>(m);
        for (int j = 0; j < m; ++j) K(i, n + j) = 1.0;
        rhs(i) = 1.0 - row_sums(i);
    }
    for (int j = 0; j + 1 < m; ++j) {
        for (int i = 0; i < n; ++i) K(n + j, i) = 1.0;
        K(n + j, n + j) = static_cast<double>(n);
        rhs(n + j) = static_cast<double>(b) - col_sums(j);
    }
    const Vector sol = K.completeOrthogonalDecomposition().solve(rhs);
    Matrix Y = B;
    Y.colwise() += sol.head(n);
    Y.rowwise() += sol.tail(m).transpose();
    return Y;
}

struct KktResidualReport {
    double stationarity_residual = 0.0;     // max interior |S_ij - nu_i - mu_j|
    Vector multiplier_nu;                   // length n
    Vector multiplier_mu;                   // length m
    double complementarity_violation = 0.0; // worst bound-sign defect at entries = 1
};

// Numerical KKT residual of the regularized problem at X.  The driving
// quantity is S_ij = (A X)_ij + G_ij + eta/2 X_ij^{-1/2}.  Interior entries
// impose the equalities S_ij = nu_i + mu_j, fitted by least squares; entries
// at 0 impose nothing (the subdifferential is unbounded there); entries at 1
// require S_ij - nu_i - mu_j >= -tol, and the report carries the worst
// shortfall.
inline KktResidualReport kkt_residual(const Matrix& X, const AssignmentProblem& p, double eta,
                                      double tol = 1e-8) {
    check_size(p, X, "X");
    if (X.minCoeff() < -tol || X.maxCoeff() > 1.0 + tol)
        throw std::domain_error("kkt_residual requires X inside the box");
    const FeasibilityReport feas = feasibility(X, p, tol);
    if (feas.row_residual > tol || feas.col_residual > tol)
        throw std::domain_error("kkt_residual requires X in the transportation polytope");

    const Matrix AX = p.A * X;
    struct Cell {
        int i, j;
        double s;
    };
    std::vector<Cell> interior, upper;
    for (int i = 0; i < p.n; ++i)
        for (int j = 0; j < p.m; ++j) {
            const double x = X(i, j);
            if (x <= tol) continue;
            const double s = AX(i, j) + p.G(i, j) + 0.5 * eta / std::sqrt(x);
            if (x >= 1.0 - tol)
                upper.push_back({i, j, s});
            else
                interior.push_back({i, j, s});
        }

    KktResidualReport report;
    report.multiplier_nu = Vector::Zero(p.n);
    report.multiplier_mu = Vector::Zero(p.m);
    if (!interior.empty()) {
        Matrix K = Matrix::Zero(static_cast<int>(interior.size()), p.n + p.m);
        Vector rhs(static_cast<int>(interior.size()));
        for (size_t r = 0; r < interior.size(); ++r) {
            K(static_cast<int>(r), interior[r].i) = 1.0;
            K(static_cast<int>(r), p.n + interior[r].j) = 1.0;
            rhs(static_cast<int>(r)) = interior[r].s;
        }
        const Vector sol = K.completeOrthogonalDecomposition().solve(rhs);
        report.multiplier_nu = sol.head(p.n);
        report.multiplier_mu = sol.tail(p.m);
    }
    for (const Cell& c : interior)
        report.stationarity_residual =
            std::max(report.stationarity_residual,
                     std::abs(c.s - report.multiplier_nu(c.i) - report.multiplier_mu(c.j)));
    for (const Cell& c : upper)
        report.complementarity_violation =
            std::max(report.complementarity_violation,
                     -(c.s - report.multiplier_nu(c.i) - report.multiplier_mu(c.j)));
    report.complementarity_violation = std::max(report.complementarity_violation, 0.0);
    return report;
}

}  // namespace assignqp
