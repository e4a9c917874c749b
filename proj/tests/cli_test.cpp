#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "diophex/cli.hpp"

using diophex::cli::run;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result call(std::vector<std::string> args) {
    args.insert(args.begin(), "diophex");
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(DIOPHEX_TEST_DATA) + "/" + name; }

std::string value(const std::string& report, const std::string& key) {
    std::istringstream in(report);
    std::string line;
    const std::string prefix = key + ": ";
    while (std::getline(in, line))
        if (line.rfind(prefix, 0) == 0) return line.substr(prefix.size());
    return {};
}

}  // namespace

TEST(CliEstimate, GoldenRatio) {
    const auto r = call({"estimate", "--matrix", data("golden.mat"), "--max-norm", "100000", "--method", "exhaustive"});
    ASSERT_EQ(r.code, 0) << r.err;
    const double beta = std::stod(value(r.out, "beta_hat"));
    EXPECT_GE(beta, 0.9);
    EXPECT_LE(beta, 1.1);
    EXPECT_EQ(value(r.out, "tool"), "diophex " + diophex::cli::version());
    EXPECT_EQ(value(r.out, "config.max-norm"), "100000");
    EXPECT_EQ(value(r.out, "precision_bits"), "128");
    EXPECT_FALSE(value(r.out, "matrix_hash").empty());
    EXPECT_FALSE(value(r.out, "certification").empty());
    EXPECT_EQ(value(r.out, "shell_3"), "q=(8,-5) norm=8 quality=9.01699437495e-02 method=exhaustive");
}

TEST(CliEstimate, RationalKernelIsInfinite) {
    const auto r = call({"estimate", "--matrix", data("rational_kernel.mat"), "--max-norm", "1000"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(value(r.out, "beta_hat").rfind("+inf", 0), 0U);
}

TEST(CliEstimate, ErrorsMapToExitCodes) {
    EXPECT_EQ(call({"estimate", "--matrix", data("malformed.mat")}).code, 2);
    EXPECT_EQ(call({"estimate", "--matrix", data("no_such_file.mat")}).code, 2);
    EXPECT_EQ(call({"estimate", "--matrix", data("golden.mat"), "--method", "nope"}).code, 2);
    EXPECT_EQ(call({"estimate", "--matrix", data("golden.mat"), "--precision-bits", "32"}).code, 2);
    EXPECT_EQ(call({"estimate", "--matrix", data("golden.mat"), "--max-norm", "100000000000", "--method",
                    "exhaustive"})
                  .code,
              3);
    EXPECT_EQ(call({}).code, 2);
    EXPECT_EQ(call({"frobnicate"}).code, 2);
}

TEST(CliPencil, GenericAndConstructed) {
    const auto g = call({"pencil", "--family", data("generic_family.fam"), "--height", "2"});
    ASSERT_EQ(g.code, 0) << g.err;
    EXPECT_EQ(value(g.out, "lower"), "2");
    EXPECT_EQ(value(g.out, "upper"), "2");
    const auto p = call({"pencil", "--family", data("line_pencil.fam"), "--height", "1"});
    ASSERT_EQ(p.code, 0) << p.err;
    EXPECT_EQ(value(p.out, "lower"), "2");
    EXPECT_EQ(value(p.out, "witness_W_basis"), "[(1,0,0,0); (0,1,0,0); (0,0,1,0)]");
    EXPECT_EQ(value(p.out, "witness_r"), "1");
    EXPECT_EQ(call({"pencil", "--family", data("generic_family.fam"), "--height", "0"}).code, 2);
}

TEST(CliNilpotent, ClosedAndCalibrated) {
    const auto h = call({"nilpotent", "--group", "heisenberg:3", "--k", "3"});
    ASSERT_EQ(h.code, 0) << h.err;
    EXPECT_EQ(value(h.out, "beta_closed"), "4/9");
    const auto u = call({"nilpotent", "--group", "ut:4", "--k", "3", "--via-pencils"});
    ASSERT_EQ(u.code, 0) << u.err;
    EXPECT_EQ(value(u.out, "beta_closed"), "7/11");
    EXPECT_EQ(value(u.out, "pencil.beta_pencil"), "7/11");
    EXPECT_EQ(value(u.out, "pencil.calibration"), "OK");
    EXPECT_EQ(value(u.out, "config.via-pencils"), "true");
}

TEST(CliNilpotent, ThresholdViolation) {
    const auto r = call({"nilpotent", "--group", "heisenberg:3", "--k", "1"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("k >= 2m"), std::string::npos);
    EXPECT_EQ(call({"nilpotent", "--group", "sl:2", "--k", "3"}).code, 2);
}

TEST(CliFlow, RationalKernelDecaysMonotonically) {
    const auto r = call({"flow", "--matrix", data("rational_kernel.mat"), "--t-max", "16"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    std::string line;
    bool header = false;
    double prev = 1e300;
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            EXPECT_EQ(line, "t,log_systole,witness_vector");
            header = true;
            continue;
        }
        const double t = std::stod(line.substr(0, line.find(',')));
        const double ls = std::stod(line.substr(line.find(',') + 1));
        if (t >= 1) {
            EXPECT_LT(ls, prev);
            EXPECT_NE(line.find("[1 -2]"), std::string::npos);
            prev = ls;
            ++rows;
        }
    }
    EXPECT_EQ(rows, 5);
}

TEST(CliSubmodular, Instances) {
    const auto r = call({"check-submodular", "--instance", "f2-cyclic4"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(value(r.out, "verdict"), "invariant minimizer found");
    const auto p = call({"check-submodular", "--instance", "planted-nonsubmodular"});
    EXPECT_EQ(p.code, 2);
    EXPECT_EQ(value(p.out, "verdict").rfind("hypotheses rejected", 0), 0U);
}

TEST(CliBall, IntegralHeisenberg) {
    const auto r = call({"ball"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(value(r.out, "beta_diophantine"), "true");
    EXPECT_EQ(value(r.out, "config.n-max"), "12");
    const auto f = call({"ball", "--generators", data("heisenberg_gens.txt"), "--n-max", "6"});
    ASSERT_EQ(f.code, 0) << f.err;
    EXPECT_EQ(value(f.out, "level_6"), value(call({"ball", "--n-max", "6"}).out, "level_6"));
}

TEST(CliDeterminism, SameConfigSameBytes) {
    const std::vector<std::string> args{"nilpotent", "--group", "two_step:3:2", "--k", "3", "--via-pencils", "--seed",
                                        "7"};
    EXPECT_EQ(call(args).out, call(args).out);
    const std::vector<std::string> est{"estimate", "--matrix", data("golden.mat"), "--max-norm", "5000"};
    EXPECT_EQ(call(est).out, call(est).out);

    const auto path = (std::filesystem::temp_directory_path() / "diophex_cli_test_out.txt").string();
    auto with_out = est;
    with_out.insert(with_out.end(), {"--out", path});
    const auto r = call(with_out);
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(value(ss.str(), "beta_hat"), value(call(est).out, "beta_hat"));
    std::filesystem::remove(path);
}

TEST(CliVersion, Flag) {
    const auto r = call({"--version"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find(diophex::cli::version()), std::string::npos);
}
