#pragma once

// Integrals int_0^X k(s) h(s) ds where k is singular at s = 0 (described by a
// Singularity) and h is smooth on [0, X] with its nearest singularity no closer
// than X beyond the right end.
//
// Power kernels whose expansion steps are rational with a small denominator q
// use s = X v^q, which turns every term s^{-lambda + m step} into an integer
// power of v times the Jacobi weight v^{q(1-lambda)-1}. Everything else goes to
// geometrically graded panels toward 0.

#include <algorithm>
#include <cmath>
#include <vector>

#include "sonine/detail/summation.hpp"
#include "sonine/errors.hpp"
#include "sonine/kernel.hpp"
#include "sonine/quadrature.hpp"

namespace sonine::detail {

inline constexpr int max_substitution_power = 24;
inline constexpr int graded_levels = 20;
inline constexpr double graded_ratio = 0.25;

/// Smallest q in [1, 24] with q * step integral for every step, or 0.
inline int rationalizing_power(const std::vector<double>& steps) {
    for (int q = 1; q <= max_substitution_power; ++q) {
        bool ok = true;
        for (double s : steps) {
            const double qs = q * s;
            if (std::abs(qs - std::round(qs)) > 1e-9 * std::max(1.0, qs)) {
                ok = false;
                break;
            }
        }
        if (ok) return q;
    }
    return 0;
}

template <class K, class H>
double substitution_integral(const K& k, double lambda, int q, const H& h, double X, int n) {
    const double b = q * (1.0 - lambda) - 1.0;
    const auto& rule = quad::unit_jacobi(0.0, b, n);
    CompensatedSum sum;
    for (int i = 0; i < rule.count(); ++i) {
        const double s = X * std::pow(rule.nodes[i], q);
        if (!(s > 0.0)) continue;
        sum += rule.weights[i] * (k(s) * std::pow(s, lambda)) * h(s);
    }
    return q * std::pow(X, 1.0 - lambda) * sum.value();
}

template <class K, class H>
double graded_integral(const K& k, const Singularity& sing, const H& h, double X, int n) {
    const int m = std::max(16, n / 4);
    const auto& gl = quad::unit_legendre(m);
    CompensatedSum sum;
    double hi = X;
    for (int j = 0; j < graded_levels; ++j) {
        const double lo = hi * graded_ratio;
        const double len = hi - lo;
        for (int i = 0; i < gl.count(); ++i) {
            const double s = lo + len * gl.nodes[i];
            sum += len * gl.weights[i] * k(s) * h(s);
        }
        hi = lo;
    }
    const double eps = hi;
    if (sing.logarithmic()) {
        if (!sing.head_mass) throw UnsupportedKernelError("logarithmic integrand without a head mass");
        sum += sing.head_mass(eps) * h(0.5 * eps);
    } else {
        const double lambda = sing.exponent;
        const auto& jr = quad::unit_jacobi(0.0, -lambda, m);
        CompensatedSum head;
        for (int i = 0; i < jr.count(); ++i) {
            const double s = eps * jr.nodes[i];
            head += jr.weights[i] * (k(s) * std::pow(s, lambda)) * h(s);
        }
        sum += std::pow(eps, 1.0 - lambda) * head.value();
    }
    return sum.value();
}

/// int_0^X k(s) h(s) ds with the singular structure of k taken from `sing`.
template <class K, class H>
double endpoint_integral(const K& k, const Singularity& sing, const H& h, double X, int n) {
    if (!sing.logarithmic()) {
        if (!(sing.exponent < 1.0)) throw UnsupportedKernelError("singular exponent must be below 1");
        if (const int q = sing.expansion_known ? rationalizing_power(sing.steps) : 0; q > 0)
            return substitution_integral(k, sing.exponent, q, h, X, n);
    }
    return graded_integral(k, sing, h, X, n);
}

}  // namespace sonine::detail
