// File formats: problem JSON {"n", "m", "A", "G"} with row-major arrays,
// dataset CSV (one sample per row), and the solver trace CSV.  Readers
// reject NaN/Inf.

#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "assignqp/mmd.hpp"
#include "assignqp/problem.hpp"
#include "assignqp/solver.hpp"

namespace assignqp {

// Maps a nlohmann byte offset to "line L, column C" for parse errors.
inline std::string describe_position(const std::string& text, size_t byte) {
    size_t line = 1, col = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline Matrix matrix_from_rowmajor(const std::vector<double>& values, int rows, int cols,
                                   const std::string& name) {
    if (static_cast<int>(values.size()) != rows * cols)
        throw std::runtime_error(name + " must hold " + std::to_string(rows * cols) + " values");
    Matrix M(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            const double v = values[static_cast<size_t>(i) * cols + j];
            if (!std::isfinite(v)) throw std::runtime_error(name + " contains NaN or Inf");
            M(i, j) = v;
        }
    return M;
}

inline std::vector<double> rowmajor_from_matrix(const Matrix& M) {
    std::vector<double> out;
    out.reserve(static_cast<size_t>(M.size()));
    for (Eigen::Index i = 0; i < M.rows(); ++i)
        for (Eigen::Index j = 0; j < M.cols(); ++j) out.push_back(M(i, j));
    return out;
}

inline AssignmentProblem problem_from_json(const nlohmann::json& doc) {
    if (!doc.contains("n") || !doc.contains("m") || !doc.contains("A") || !doc.contains("G"))
        throw std::runtime_error("problem JSON needs keys n, m, A, G");
    const int n = doc.at("n").get<int>();
    const int m = doc.at("m").get<int>();
    if (n <= 0 || m <= 0) throw std::runtime_error("n and m must be positive");
    Matrix A = matrix_from_rowmajor(doc.at("A").get<std::vector<double>>(), n, n, "A");
    Matrix G = matrix_from_rowmajor(doc.at("G").get<std::vector<double>>(), n, m, "G");
    return make_problem(std::move(A), std::move(G), n, m);
}

inline AssignmentProblem read_problem_json(const std::string& path) {
    const std::string text = read_file(path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("malformed JSON in " + path + " at " +
                                 describe_position(text, e.byte) + ": " + e.what());
    }
    return problem_from_json(doc);
}

inline nlohmann::json problem_to_json(const AssignmentProblem& p) {
    return nlohmann::json{
        {"n", p.n}, {"m", p.m}, {"A", rowmajor_from_matrix(p.A)}, {"G", rowmajor_from_matrix(p.G)}};
}

inline void write_problem_json(const std::string& path, const AssignmentProblem& p) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << problem_to_json(p).dump(2) << "\n";
}

// Dataset CSV: one row per sample, d comma-separated reals.
inline Dataset read_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            size_t consumed = 0;
            double v;
            try {
                v = std::stod(cell, &consumed);
            } catch (const std::exception&) {
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": cannot parse value '" + cell + "'");
            }
            while (consumed < cell.size() && std::isspace(static_cast<unsigned char>(cell[consumed])))
                ++consumed;
            if (consumed != cell.size())
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": trailing garbage in '" + cell + "'");
            if (!std::isfinite(v))
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": NaN or Inf rejected");
            row.push_back(v);
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": ragged row (" +
                                     std::to_string(row.size()) + " vs " +
                                     std::to_string(rows.front().size()) + " columns)");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error(path + ": empty dataset");
    Matrix points(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows.front().size(); ++j)
            points(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
    return make_dataset(std::move(points));
}

inline std::string format_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Trace CSV, one row per iteration at full double precision.
inline void write_trace_csv(const std::string& path, const std::vector<IterationRecord>& trace) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "k,h,p,lagrangian,nonbinary_fraction,lambda_norm,objective\n";
    for (const IterationRecord& rec : trace)
        out << rec.k << ',' << format_full(rec.h) << ',' << format_full(rec.p) << ','
            << format_full(rec.lagrangian) << ',' << format_full(rec.nonbinary_fraction) << ','
            << format_full(rec.lambda_norm) << ',' << format_full(rec.objective_original) << '\n';
}

}  // namespace assignqp
