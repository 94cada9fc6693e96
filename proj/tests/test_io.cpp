#include "assignqp/io.hpp"

#include <gtest/gtest.h>

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "assignqp/sha256.hpp"

namespace assignqp {
namespace {

namespace fs = std::filesystem;

class TempDir {
  public:
    TempDir() {
        path_ = fs::temp_directory_path() /
                ("assignqp_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

  private:
    static inline int counter_ = 0;
    fs::path path_;
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

TEST(ProblemJson, RoundTrip) {
    TempDir dir;
    Matrix A(2, 2), G(2, 1);
    A << 1.0, 0.25, 0.25, 2.0;
    G << -1.5, 0.125;
    const AssignmentProblem p = make_problem(A, G, 2, 1);
    write_problem_json(dir.file("p.json"), p);
    const AssignmentProblem q = read_problem_json(dir.file("p.json"));
    EXPECT_EQ(q.n, 2);
    EXPECT_EQ(q.m, 1);
    EXPECT_EQ(q.A, p.A);
    EXPECT_EQ(q.G, p.G);
}

TEST(ProblemJson, ParseErrorReportsLineAndColumn) {
    TempDir dir;
    write_text(dir.file("bad.json"), "{\n  \"n\": 2,\n  \"m\": oops\n}\n");
    try {
        read_problem_json(dir.file("bad.json"));
        FAIL() << "expected parse error";
    } catch (const std::runtime_error& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
}

TEST(ProblemJson, RejectsNonFiniteValues) {
    TempDir dir;
    // 1e999 overflows to infinity
    write_text(dir.file("inf.json"), R"({"n": 1, "m": 1, "A": [1e999], "G": [0.0]})");
    EXPECT_THROW(read_problem_json(dir.file("inf.json")), std::runtime_error);
    write_text(dir.file("nan.json"), R"({"n": 1, "m": 1, "A": [NaN], "G": [0.0]})");
    EXPECT_THROW(read_problem_json(dir.file("nan.json")), std::runtime_error);
}

TEST(ProblemJson, RejectsWrongElementCount) {
    TempDir dir;
    write_text(dir.file("short.json"), R"({"n": 2, "m": 1, "A": [1, 0, 0], "G": [0, 0]})");
    EXPECT_THROW(read_problem_json(dir.file("short.json")), std::runtime_error);
}

TEST(DatasetCsv, ParsesRows) {
    TempDir dir;
    write_text(dir.file("d.csv"), "1.0,2.0\n3.5,-4.25\n0,1e-3\n");
    const Dataset d = read_dataset_csv(dir.file("d.csv"));
    EXPECT_EQ(d.n, 3);
    EXPECT_EQ(d.d, 2);
    EXPECT_DOUBLE_EQ(d.points(1, 1), -4.25);
    EXPECT_DOUBLE_EQ(d.points(2, 1), 1e-3);
}

TEST(DatasetCsv, RejectsRaggedAndGarbage) {
    TempDir dir;
    write_text(dir.file("ragged.csv"), "1,2\n3\n");
    EXPECT_THROW(read_dataset_csv(dir.file("ragged.csv")), std::runtime_error);
    write_text(dir.file("garbage.csv"), "1,2\n3,abc\n");
    EXPECT_THROW(read_dataset_csv(dir.file("garbage.csv")), std::runtime_error);
    write_text(dir.file("nan.csv"), "1,2\n3,nan\n");
    EXPECT_THROW(read_dataset_csv(dir.file("nan.csv")), std::runtime_error);
}

TEST(TraceCsv, FullPrecisionRoundTrip) {
    TempDir dir;
    std::vector<IterationRecord> trace;
    trace.push_back({1, 0.1234567890123456789, 1e-17, -3.0000000000000004, 0.5, 2.0 / 3.0, 1.0});
    trace.push_back({2, 1.0 / 7.0, 0.0, 0.1 + 0.2, 0.0, 17.0, -5.5});
    write_trace_csv(dir.file("t.csv"), trace);

    std::ifstream in(dir.file("t.csv"));
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "k,h,p,lagrangian,nonbinary_fraction,lambda_norm,objective");
    for (const IterationRecord& expected : trace) {
        std::string line;
        ASSERT_TRUE(std::getline(in, line));
        int k;
        double h, p, lag, frac, lam, obj;
        ASSERT_EQ(std::sscanf(line.c_str(), "%d,%lf,%lf,%lf,%lf,%lf,%lf", &k, &h, &p, &lag, &frac,
                              &lam, &obj),
                  7);
        EXPECT_EQ(k, expected.k);
        EXPECT_EQ(h, expected.h);  // bit-exact after 17 significant digits
        EXPECT_EQ(p, expected.p);
        EXPECT_EQ(lag, expected.lagrangian);
        EXPECT_EQ(frac, expected.nonbinary_fraction);
        EXPECT_EQ(lam, expected.lambda_norm);
        EXPECT_EQ(obj, expected.objective_original);
    }
}

TEST(Sha256, KnownVectors) {
    EXPECT_EQ(sha256_hex(""),
              "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    EXPECT_EQ(sha256_hex("abc"),
              "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    EXPECT_EQ(sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq"),
              "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
    // block-boundary length
    EXPECT_EQ(sha256_hex(std::string(64, 'a')),
              "ffe054fe7ae0cb6dc65c3af9b61d5209f439851db43d0ba5997337df154668eb");
}

TEST(Sha256, FileDigestMatchesStringDigest) {
    TempDir dir;
    const std::string payload = "assignment matrices\n";
    write_text(dir.file("payload.txt"), payload);
    EXPECT_EQ(sha256_file_hex(dir.file("payload.txt")), sha256_hex(payload));
}

}  // namespace
}  // namespace assignqp
