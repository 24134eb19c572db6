#include <cmath>

#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include "sonine/conv.hpp"
#include "sonine/kernel.hpp"
#include "sonine/series_sonine.hpp"

using namespace sonine;
using boost::math::tgamma;

namespace {
double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }
}  // namespace

TEST(ExpBetaSeries, Coefficients) {
    EXPECT_EQ(exp_beta_series(0.3, 0.6, 0).coeffs, std::vector<double>{1.0});
    const auto s = exp_beta_series(0.3, 0.6, 3);
    EXPECT_DOUBLE_EQ(s.lead, -0.3);
    EXPECT_DOUBLE_EQ(s.step, 0.6);
    ASSERT_EQ(s.coeffs.size(), 4u);
    EXPECT_DOUBLE_EQ(s.coeffs[1], -1.0);
    EXPECT_DOUBLE_EQ(s.coeffs[2], 0.5);
    EXPECT_NEAR(s.coeffs[3], -1.0 / 6.0, 1e-17);
    EXPECT_THROW(exp_beta_series(0.0, 0.5, 3), DomainError);
    EXPECT_THROW(exp_beta_series(0.5, 1.0, 3), DomainError);
}

TEST(ExpBetaSeries, MatchesClosedForm) {
    const auto closed = [](double t) { return std::pow(t, -0.3) * std::exp(-std::pow(t, 0.6)); };
    EXPECT_LE(rel(eval_series(exp_beta_series(0.3, 0.6, 30), 0.5), closed(0.5)), 1e-12);
    EXPECT_LE(rel(eval_series(exp_beta_series(0.3, 0.6, 40), 0.25), closed(0.25)), 1e-12);
}

TEST(EvalSeries, Examples) {
    EXPECT_DOUBLE_EQ(eval_series({0.0, 1.0, {1.0}}, 3.7), 1.0);
    EXPECT_NEAR(eval_series({-0.5, 1.0, {1.0 / std::sqrt(M_PI)}}, 4.0), 0.28209479177387814, 1e-15);
    EXPECT_THROW(eval_series({0.0, 1.0, {1.0}}, 0.0), DomainError);
}

TEST(EvalSeries, TruncationFlag) {
    const auto s = exp_beta_series(0.3, 0.6, 5);
    EXPECT_TRUE(eval_series_checked(s, 0.9).truncation_dominated);
    EXPECT_FALSE(eval_series_checked(exp_beta_series(0.3, 0.6, 40), 1e-4).truncation_dominated);
}

TEST(AssociateSeries, PowerLawHasSingleTerm) {
    for (double alpha : {0.1, 0.3, 0.5, 0.8}) {
        const auto r = associate_series({-alpha, 1.0, {1.0 / tgamma(1.0 - alpha)}}, 6);
        EXPECT_NEAR(r.f.lead, alpha - 1.0, 1e-15);
        EXPECT_LE(rel(r.f.coeffs[0], 1.0 / tgamma(alpha)), 1e-14);
        for (int k = 1; k <= 6; ++k) EXPECT_EQ(r.f.coeffs[k], 0.0);
    }
}

TEST(AssociateSeries, ExpDampedGoldenConstants) {
    const double alpha = 0.3, beta = 0.6;
    const auto r = associate_series(exp_beta_series(alpha, beta, 4), 4);
    const double b0 = std::sin(alpha * M_PI) / M_PI;
    EXPECT_LE(rel(r.f.coeffs[0], b0), 1e-14);
    EXPECT_LE(rel(r.b0_closed_form, b0), 1e-14);
    const double ratio = tgamma(alpha) * tgamma(beta - alpha + 1) / (tgamma(alpha + beta) * tgamma(1 - alpha));
    EXPECT_LE(rel(r.f.coeffs[1] / r.f.coeffs[0], ratio), 1e-12);
    EXPECT_LE(rel(ratio, tgamma(0.3) * tgamma(1.3) / (tgamma(0.9) * tgamma(0.7))), 1e-15);
}

TEST(AssociateSeries, MLKernelAssociateHasTwoTerms) {
    const double alpha = 0.5;
    const auto r = associate_series(to_frac_series(Kernel(kernels::MLKernel{alpha, alpha}), 12), 12);
    EXPECT_LE(rel(r.f.coeffs[0], 1.0 / tgamma(1.0 - alpha)), 1e-13);
    EXPECT_LE(rel(r.f.coeffs[1], 1.0), 1e-12);
    for (int k = 2; k <= 12; ++k) EXPECT_LE(std::abs(r.f.coeffs[k]), 1e-10) << k;
}

TEST(AssociateSeries, Involution) {
    const auto g = exp_beta_series(0.3, 0.6, 12);
    const auto f = associate_series(g, 12).f;
    const auto back = associate_series(f, 12).f;
    EXPECT_NEAR(back.lead, g.lead, 1e-15);
    EXPECT_EQ(back.step, g.step);
    for (int m = 0; m <= 12; ++m) EXPECT_LE(rel(back.coeffs[m], g.coeffs[m]), 1e-9) << m;
}

TEST(AssociateSeries, ResidualByConstruction) {
    for (auto [alpha, beta] : {std::pair{0.3, 0.6}, {0.5, 0.5}, {0.7, 0.25}, {0.2, 0.9}}) {
        const int N = 30;
        const auto g = exp_beta_series(alpha, beta, N);
        const auto r = associate_series(g, N);
        EXPECT_NEAR(r.f.lead + g.lead, -1.0, 1e-15);
        EXPECT_EQ(r.f.step, g.step);
        const auto c = series_convolution_coefficients(g, r.f, N);
        EXPECT_NEAR(c[0], 1.0, 1e-13);
        for (int k = 1; k <= N; ++k) EXPECT_LE(std::abs(c[k]), 1e-12) << alpha << ' ' << beta << ' ' << k;
    }
}

TEST(AssociateSeries, TimeDomainCrossCheck) {
    const int N = 30;
    const Kernel g(kernels::ExpDamped{0.3, 0.6});
    const auto r = associate_series(to_frac_series(g, N), N);
    const SoninePair pair{g, Kernel(kernels::Series{r.f}), "expbeta"};
    const auto rep = sonine_residual(pair, logspace(0.01, 0.5, 12), 64, 1e-8);
    EXPECT_TRUE(rep.passed) << rep.max_abs_residual;
}

TEST(AssociateSeries, HighOrderStaysFinite) {
    const auto r = associate_series(exp_beta_series(0.5, 0.05, 400), 400);
    for (double b : r.f.coeffs) EXPECT_TRUE(std::isfinite(b));
}

TEST(AssociateSeries, Errors) {
    EXPECT_THROW(associate_series({0.0, 1.0, {1.0}}, 3), DomainError);
    EXPECT_THROW(associate_series({-1.0, 1.0, {1.0}}, 3), DomainError);
    EXPECT_THROW(associate_series({-0.5, 1.0, {0.0, 1.0}}, 3), DomainError);
    EXPECT_THROW(associate_series({-0.5, 0.0, {1.0}}, 3), DomainError);
    EXPECT_THROW(associate_series({-0.5, 1.0, {1.0}}, -1), DomainError);
}
