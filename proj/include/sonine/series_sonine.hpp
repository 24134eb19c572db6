#pragma once

/**
 * @file series_sonine.hpp
 * @brief Associate of a kernel given as a fractional power series.
 *
 * For g(t) = t^{-alpha} sum_n a_n t^{n beta}, the associate is sought as
 * f(t) = t^{alpha-1} sum_n b_n t^{n beta}. Termwise convolution with
 * t^mu * t^nu = B(mu+1, nu+1) t^{mu+nu+1} turns (g*f)(t) = 1 into a lower
 * triangular system for the b_n, solved one order at a time. Gamma ratios are
 * formed from log-gamma values, with signs carried by the coefficients only,
 * since every Gamma argument in the recursion is positive.
 */

#include <cmath>
#include <vector>

#include "sonine/detail/summation.hpp"
#include "sonine/errors.hpp"
#include "sonine/frac_series.hpp"
#include "sonine/specfun.hpp"

namespace sonine {

struct AssociateResult {
    FracSeries f;
    double b0_closed_form = 0.0;  // sin(pi alpha) / (pi a_0)
    int order = 0;
};

/// t^{-alpha} exp(-t^beta) as {lead -alpha, step beta, (-1)^m / m!}.
inline FracSeries exp_beta_series(double alpha, double beta, int order) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("exp_beta_series: alpha must lie in (0, 1)");
    if (!(beta > 0.0 && beta < 1.0)) throw DomainError("exp_beta_series: beta must lie in (0, 1)");
    if (order < 0) throw DomainError("exp_beta_series: order must be non-negative");
    FracSeries s{-alpha, beta, {}};
    double c = 1.0;
    for (int m = 0; m <= order; ++m) {
        s.coeffs.push_back(c);
        c *= -1.0 / (m + 1);
    }
    return s;
}

inline AssociateResult associate_series(const FracSeries& g, int order) {
    const double alpha = -g.lead;
    if (!(alpha > 0.0 && alpha < 1.0))
        throw DomainError("associate_series: lead exponent must lie in (-1, 0)");
    if (!(g.step > 0.0)) throw DomainError("associate_series: step must be positive");
    if (g.coeffs.empty() || g.coeffs.front() == 0.0)
        throw DomainError("associate_series: leading coefficient must be non-zero");
    if (order < 0) throw DomainError("associate_series: order must be non-negative");

    const double beta = g.step;
    const double a0 = g.coeffs.front();
    const double lg_one_minus_alpha = specfun::log_gamma(1.0 - alpha);

    std::vector<double> b(order + 1, 0.0);
    b[0] = 1.0 / (a0 * specfun::gamma(1.0 - alpha) * specfun::gamma(alpha));
    for (int k = 1; k <= order; ++k) {
        const double lg_den = specfun::log_gamma(k * beta + alpha) + lg_one_minus_alpha;
        detail::CompensatedSum s;
        for (int n = 0; n < k; ++n) {
            const double a = g.coeff(static_cast<std::size_t>(k - n));
            if (a == 0.0 || b[n] == 0.0) continue;
            const double ratio = std::exp(specfun::log_gamma((k - n) * beta + 1.0 - alpha) +
                                          specfun::log_gamma(n * beta + alpha) - lg_den);
            s += a * b[n] * ratio;
        }
        b[k] = -s.value() / a0;
    }

    AssociateResult out;
    out.f = FracSeries{alpha - 1.0, beta, std::move(b)};
    out.b0_closed_form = specfun::sin_pi(alpha) / (specfun::pi * a0);
    out.order = order;
    return out;
}

/**
 * Coefficients c_k of (g*f)(t) = sum_k c_k t^{k step} for two series whose
 * leads add to -1 and which share a step. A Sonine pair gives c_0 = 1 and
 * c_k = 0 for k >= 1.
 */
inline std::vector<double> series_convolution_coefficients(const FracSeries& g, const FracSeries& f, int order) {
    if (std::abs(g.lead + f.lead + 1.0) > 1e-14)
        throw DomainError("series_convolution_coefficients: leads must add to -1");
    if (g.step != f.step) throw DomainError("series_convolution_coefficients: steps differ");
    const double beta = g.step;
    std::vector<double> c(order + 1, 0.0);
    for (int k = 0; k <= order; ++k) {
        detail::CompensatedSum s;
        const double lg_den = specfun::log_gamma(k * beta + 1.0);
        for (int n = 0; n <= k; ++n) {
            const double a = g.coeff(static_cast<std::size_t>(k - n));
            const double bn = f.coeff(static_cast<std::size_t>(n));
            if (a == 0.0 || bn == 0.0) continue;
            s += a * bn *
                 std::exp(specfun::log_gamma(g.lead + (k - n) * beta + 1.0) +
                          specfun::log_gamma(f.lead + n * beta + 1.0) - lg_den);
        }
        c[k] = s.value();
    }
    return c;
}

}  // namespace sonine
