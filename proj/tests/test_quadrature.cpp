#include <cmath>
#include <thread>
#include <vector>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include "sonine/quadrature.hpp"

using namespace sonine::quad;

namespace {

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

void expect_valid(const QuadratureRule& r, double lo, double hi) {
    for (int i = 0; i < r.count(); ++i) {
        EXPECT_GT(r.weights[i], 0.0);
        EXPECT_GT(r.nodes[i], lo);
        EXPECT_LT(r.nodes[i], hi);
        if (i > 0) {
            EXPECT_GT(r.nodes[i], r.nodes[i - 1]);
        }
    }
}

}  // namespace

TEST(GaussRule, TwoPointLegendre) {
    const auto& r = gauss_rule(RuleSpec::legendre(), 2);
    ASSERT_EQ(r.count(), 2);
    EXPECT_NEAR(r.nodes[0], -1.0 / std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(r.nodes[1], 1.0 / std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(r.weights[0], 1.0, 1e-15);
    EXPECT_NEAR(r.weights[1], 1.0, 1e-15);
}

TEST(GaussRule, JacobiZeroZeroIsLegendre) {
    for (int n : {2, 7, 32, 64, 128}) {
        const auto& j = gauss_rule(RuleSpec::jacobi(0.0, 0.0), n);
        const auto& l = gauss_rule(RuleSpec::legendre(), n);
        for (int i = 0; i < n; ++i) {
            EXPECT_NEAR(j.nodes[i], l.nodes[i], 1e-13);
            EXPECT_NEAR(j.weights[i], l.weights[i], 1e-13);
        }
    }
}

TEST(GaussRule, ArcsineMass) {
    const auto& r = gauss_rule(RuleSpec::jacobi(-0.5, -0.5), 16);
    EXPECT_LE(rel(r.integrate([](double) { return 1.0; }), M_PI), 1e-13);
    const auto& u = unit_jacobi(-0.5, -0.5, 16);
    EXPECT_LE(rel(u.integrate([](double) { return 1.0; }), M_PI), 1e-13);
}

TEST(GaussRule, JacobiMomentsExact) {
    for (auto [a, b] : {std::pair{-0.5, -0.5}, {-0.3, 0.4}, {0.0, -0.9}, {-0.9, 0.0}, {1.5, 0.2}}) {
        for (int n : {2, 5, 16, 40}) {
            const auto& r = gauss_rule(RuleSpec::jacobi(a, b), n);
            expect_valid(r, -1.0, 1.0);
            for (int j = 0; j <= 2 * n - 1; ++j) {
                // int (1-x)^a (1+x)^{b+j} dx = 2^{a+b+j+1} B(a+1, b+j+1)
                const double want = std::ldexp(1.0, j) * std::pow(2.0, a + b + 1) * boost::math::beta(a + 1, b + j + 1);
                const double got = r.integrate([j](double x) { return std::pow(1.0 + x, j); });
                EXPECT_LE(rel(got, want), 1e-12) << a << ' ' << b << " n=" << n << " j=" << j;
            }
        }
    }
}

TEST(GaussRule, UnitJacobiMomentsExact) {
    for (auto [a, b] : {std::pair{0.0, -0.5}, {0.0, -0.93}, {-0.7, -0.2}, {0.0, 5.0}}) {
        for (int n : {3, 16, 64}) {
            const auto& r = unit_jacobi(a, b, n);
            expect_valid(r, 0.0, 1.0);
            for (int j = 0; j <= 2 * n - 1; j += (n > 16 ? 7 : 1)) {
                const double want = boost::math::beta(b + j + 1, a + 1);
                const double got = r.integrate([j](double v) { return std::pow(v, j); });
                EXPECT_LE(rel(got, want), 1e-12) << a << ' ' << b << " n=" << n << " j=" << j;
            }
        }
    }
}

TEST(GaussRule, LaguerreMomentsExact) {
    for (double a : {-0.5, 0.0, 0.3, 2.0}) {
        for (int n : {2, 8, 24}) {
            const auto& r = gauss_rule(RuleSpec::laguerre(a), n);
            expect_valid(r, 0.0, INFINITY);
            for (int j = 0; j <= 2 * n - 1; ++j) {
                const double want = boost::math::tgamma(a + j + 1);
                const double got = r.integrate([j](double x) { return std::pow(x, j); });
                EXPECT_LE(rel(got, want), 1e-12) << a << " n=" << n << " j=" << j;
            }
        }
    }
}

TEST(GaussRule, LargeRulesStayValid) {
    expect_valid(gauss_rule(RuleSpec::legendre(), 256), -1.0, 1.0);
    expect_valid(gauss_rule(RuleSpec::jacobi(-0.5, 0.25), 256), -1.0, 1.0);
    const auto& lag = gauss_rule(RuleSpec::laguerre(0.5), 128);
    expect_valid(lag, 0.0, INFINITY);
    EXPECT_LE(rel(lag.integrate([](double) { return 1.0; }), boost::math::tgamma(1.5)), 1e-12);
}

TEST(GaussRule, ParameterErrors) {
    EXPECT_THROW(gauss_rule(RuleSpec::legendre(), 1), sonine::DomainError);
    EXPECT_THROW(gauss_rule(RuleSpec::legendre(), 257), sonine::DomainError);
    EXPECT_THROW(gauss_rule(RuleSpec::jacobi(-1.0, 0.0), 8), sonine::DomainError);
    EXPECT_THROW(gauss_rule(RuleSpec::jacobi(0.0, -1.2), 8), sonine::DomainError);
    EXPECT_THROW(gauss_rule(RuleSpec::laguerre(-1.0), 8), sonine::DomainError);
    EXPECT_THROW(gauss_rule(RuleSpec::laguerre(0.0), 129), sonine::DomainError);
}

TEST(GaussRule, CacheReturnsSameRuleAcrossThreads) {
    const QuadratureRule* first = &gauss_rule(RuleSpec::jacobi(0.125, -0.375), 48);
    std::vector<const QuadratureRule*> seen(8);
    std::vector<std::thread> threads;
    for (int i = 0; i < 8; ++i)
        threads.emplace_back([&seen, i] { seen[i] = &gauss_rule(RuleSpec::jacobi(0.125, -0.375), 48); });
    for (auto& t : threads) t.join();
    for (auto* p : seen) EXPECT_EQ(p, first);
}
