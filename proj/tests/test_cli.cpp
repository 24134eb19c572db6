#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "cli.hpp"

using sonine::cli::run_cli;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

double second_column(const std::string& line) { return std::stod(line.substr(line.find(',') + 1)); }

}  // namespace

TEST(Cli, EvalTable) {
    const auto r = run({"eval", "--kernel", "powerlaw:alpha=0.5", "--tmin", "1", "--tmax", "1", "--points", "1"});
    EXPECT_EQ(r.code, 0);
    const auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 2u);
    EXPECT_EQ(ls[0], "t,value");
    EXPECT_NEAR(second_column(ls[1]), 1.0 / std::sqrt(M_PI), 1e-15);

    const auto e = run({"eval", "--kernel", "ml:alpha=1,beta=1", "--tmin", "2", "--tmax", "2", "--points", "1"});
    EXPECT_NEAR(second_column(lines(e.out)[1]), std::exp(-2.0), 1e-15);
}

TEST(Cli, EvalRowsAreLogSpaced) {
    const auto r = run({"eval", "--kernel", "dist-order-v", "--tmin", "0.01", "--tmax", "100", "--points", "5"});
    const auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 6u);
    EXPECT_EQ(ls[3].substr(0, ls[3].find(',')), "1");
}

TEST(Cli, DefaultsArePerSubcommand) {
    const auto v = lines(run({"verify", "--pair", "powerlaw:alpha=0.5"}).out);
    ASSERT_EQ(v.size(), 21u);
    EXPECT_EQ(v[1].substr(0, v[1].find(',')), "0.001");
    EXPECT_EQ(v[20].substr(0, v[20].find(',')), "10");

    const auto a = lines(run({"associate", "--g", "powerlaw:alpha=0.3"}).out);
    ASSERT_EQ(a.size(), 32u);  // header plus b_0..b_30
    EXPECT_EQ(a[31].substr(0, a[31].find(',')), "30");

    const auto d = lines(run({"decompose", "--kernel", "ml:alpha=1,beta=1"}).out);
    ASSERT_EQ(d.size(), 21u);
    EXPECT_EQ(d[1].substr(0, d[1].find(',')), "0.10000000000000001");
    EXPECT_EQ(d[20].substr(0, d[20].find(',')), "5");
}

TEST(Cli, MalformedSpecReportsPosition) {
    const auto r = run({"eval", "--kernel", "ml:alpha="});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("position 9"), std::string::npos) << r.err;
}

TEST(Cli, VerifyExitCodes) {
    const auto ok = run({"verify", "--pair", "powerlaw:alpha=0.5"});
    EXPECT_EQ(ok.code, 0);
    EXPECT_EQ(lines(ok.out)[0], "t,residual");
    EXPECT_EQ(lines(ok.out).size(), 21u);
    EXPECT_NE(ok.err.find("passed=true"), std::string::npos);
    for (std::size_t i = 1; i < lines(ok.out).size(); ++i) EXPECT_LE(std::abs(second_column(lines(ok.out)[i])), 1e-10);

    EXPECT_EQ(run({"verify", "--g", "powerlaw:alpha=0.3", "--f", "powerlaw:alpha=0.3"}).code, 1);
    EXPECT_EQ(run({"verify", "--pair", "counterexample"}).code, 0);
    EXPECT_EQ(run({"verify", "--g", "powerlaw:alpha=0.3"}).code, 2);
    EXPECT_EQ(run({"verify", "--pair", "nope"}).code, 2);
    EXPECT_EQ(run({"verify", "--pair", "powerlaw:alpha=0.5", "--g", "powerlaw:alpha=0.5"}).code, 2);
    EXPECT_EQ(run({"verify", "--pair", "powerlaw:alpha=0.5", "--tmin", "5", "--tmax", "1"}).code, 2);
    EXPECT_EQ(run({"verify", "--pair", "powerlaw:alpha=0.5", "--rule-size", "1"}).code, 2);
}

TEST(Cli, JsonLines) {
    const auto r = run({"verify", "--pair", "ml:alpha=0.5,beta=0.5", "--points", "3", "--out", "jsonl"});
    EXPECT_EQ(r.code, 0);
    const auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 4u);
    const auto row = nlohmann::json::parse(ls[0]);
    EXPECT_TRUE(row.contains("t"));
    EXPECT_TRUE(row.contains("residual"));
    const auto summary = nlohmann::json::parse(ls[3]).at("summary");
    EXPECT_TRUE(summary.at("passed").get<bool>());
    EXPECT_LE(summary.at("max_abs_residual").get<double>(), 1e-7);
    EXPECT_EQ(run({"verify", "--pair", "counterexample", "--out", "xml"}).code, 2);
}

TEST(Cli, Associate) {
    const auto r = run({"associate", "--g", "expbeta:alpha=0.3,beta=0.6", "--order", "1"});
    EXPECT_EQ(r.code, 0);
    const auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 3u);
    EXPECT_EQ(ls[0], "n,b_n");
    const double b0 = second_column(ls[1]), b1 = second_column(ls[2]);
    EXPECT_NEAR(b0 / (std::sin(0.3 * M_PI) / M_PI), 1.0, 1e-14);
    const double ratio = std::tgamma(0.3) * std::tgamma(1.3) / (std::tgamma(0.9) * std::tgamma(0.7));
    EXPECT_NEAR(b1 / b0 / ratio, 1.0, 1e-12);

    const auto pl = run({"associate", "--g", "powerlaw:alpha=0.5", "--order", "5"});
    const auto pls = lines(pl.out);
    ASSERT_EQ(pls.size(), 7u);
    EXPECT_NEAR(second_column(pls[1]), 1.0 / std::sqrt(M_PI), 1e-15);
    for (int n = 2; n <= 6; ++n) EXPECT_EQ(second_column(pls[n]), 0.0);
}

TEST(Cli, AssociateCheck) {
    const auto r = run({"associate", "--g", "series:lead=-0.5,step=1,coeffs=1", "--order", "0", "--check", "--tol",
                        "1e-10"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("t,residual"), std::string::npos);
    const auto ex = run({"associate", "--g", "expbeta:alpha=0.3,beta=0.6", "--order", "30", "--check", "--tol", "1e-8"});
    EXPECT_EQ(ex.code, 0) << ex.err;
    EXPECT_EQ(run({"associate", "--g", "dist-order-w"}).code, 2);
    EXPECT_EQ(run({"associate", "--g", "series:lead=0,coeffs=1"}).code, 2);
}

TEST(Cli, Laplace) {
    const auto ml = run({"laplace", "--pair", "ml:alpha=0.5,beta=0.5", "--points", "6"});
    EXPECT_EQ(ml.code, 0);
    EXPECT_EQ(lines(ml.out)[0], "p,residual");
    EXPECT_EQ(run({"laplace", "--pair", "powerlaw:alpha=0.7", "--pmin", "0.1", "--pmax", "100", "--points", "6"}).code, 0);
    EXPECT_EQ(run({"laplace", "--pair", "dist-order", "--tol", "1e-5", "--points", "6"}).code, 0);
    EXPECT_EQ(run({"laplace", "--g", "powerlaw:alpha=0.3", "--f", "powerlaw:alpha=0.3", "--points", "4"}).code, 1);
}

TEST(Cli, Decompose) {
    const auto r = run({"decompose", "--kernel", "ml:alpha=1,beta=1", "--points", "4"});
    EXPECT_EQ(r.code, 0) << r.err;
    const auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 5u);
    for (std::size_t i = 1; i < ls.size(); ++i) EXPECT_NEAR(second_column(ls[i]), 1.0, 1e-6);
    EXPECT_NE(r.err.find("a=1"), std::string::npos);
    EXPECT_EQ(run({"decompose", "--kernel", "powerlaw:alpha=0.5"}).code, 2);
}

TEST(Cli, Diagnose) {
    const auto pl = run({"diagnose", "--kernel", "powerlaw:alpha=0.5"});
    EXPECT_EQ(pl.code, 0);
    const auto ls = lines(pl.out);
    ASSERT_EQ(ls.size(), 4u);
    EXPECT_NEAR(nlohmann::json::parse(ls[2]).at("value").get<double>(), -0.5, 1e-3);
    EXPECT_TRUE(nlohmann::json::parse(ls[3]).at("passed").get<bool>());

    const auto cos = run({"diagnose", "--kernel", "counterexample-cos"});
    EXPECT_EQ(cos.code, 1);
    EXPECT_EQ(nlohmann::json::parse(lines(cos.out)[0]).at("violation").at("order").get<int>(), 0);

    const auto one = run({"diagnose", "--kernel", "series:lead=0,step=1,coeffs=1"});
    EXPECT_EQ(one.code, 1);
    EXPECT_FALSE(nlohmann::json::parse(lines(one.out)[1]).at("grows_unboundedly").get<bool>());
    EXPECT_EQ(run({"diagnose", "--kernel", "powerlaw:alpha=0.5", "--order", "9"}).code, 2);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"eval"}).code, 2);
    EXPECT_EQ(run({"eval", "--kernel", "powerlaw:alpha=0.5", "--points", "zero"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, EnvironmentDefaultsBelowFlags) {
    ::setenv("SONINE_TOL", "1e-30", 1);
    EXPECT_EQ(run({"verify", "--pair", "ml:alpha=0.5,beta=0.5", "--points", "3"}).code, 1);
    EXPECT_EQ(run({"verify", "--pair", "ml:alpha=0.5,beta=0.5", "--points", "3", "--tol", "1e-6"}).code, 0);
    ::unsetenv("SONINE_TOL");
    ::setenv("SONINE_RULE_SIZE", "1", 1);
    EXPECT_EQ(run({"verify", "--pair", "powerlaw:alpha=0.5", "--points", "3"}).code, 2);
    EXPECT_EQ(run({"verify", "--pair", "powerlaw:alpha=0.5", "--points", "3", "--rule-size", "32"}).code, 0);
    ::unsetenv("SONINE_RULE_SIZE");
}

TEST(Cli, Deterministic) {
    const std::vector<std::string> args{"verify", "--pair", "shifted:alpha=0.5,a=1", "--points", "5"};
    const auto a = run(args), b = run(args);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.err, b.err);
}
