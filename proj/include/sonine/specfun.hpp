#pragma once

/**
 * @file specfun.hpp
 * @brief Real special functions used throughout the library: Gamma and friends,
 * the two-parameter Mittag-Leffler function on the negative real axis, the
 * exponential integral E1 and a scaled upper incomplete gamma function.
 *
 * Every function is pure. Arguments outside the stated domain raise
 * DomainError rather than returning NaN.
 */

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "sonine/detail/gauss_kronrod.hpp"
#include "sonine/detail/summation.hpp"
#include "sonine/errors.hpp"

namespace sonine::specfun {

inline constexpr double pi = std::numbers::pi;
inline constexpr double euler_gamma = std::numbers::egamma;

inline bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

/// sin(pi x) with exact argument reduction; exactly zero at the integers.
inline double sin_pi(double x) {
    if (x == std::floor(x)) return 0.0;
    double r = std::remainder(x, 2.0);  // r in [-1, 1], exact
    if (r > 0.5)
        r = 1.0 - r;
    else if (r < -0.5)
        r = -1.0 - r;
    return std::sin(pi * r);
}

/// cos(pi x) with exact argument reduction; exactly zero at the half-integers.
inline double cos_pi(double x) {
    double r = std::abs(std::remainder(x, 2.0));  // [0, 1]
    if (r == 0.5) return 0.0;
    if (r < 0.25) return std::cos(pi * r);
    if (r <= 0.75) return std::sin(pi * (0.5 - r));
    return -std::cos(pi * (1.0 - r));
}

namespace detail {

// Godfrey's coefficients for g = 607/128, 15 terms; Gamma(z+1) = sqrt(2 pi) t^(z+1/2) e^-t A(z).
inline constexpr double lanczos_g = 607.0 / 128.0;
inline constexpr std::array<double, 15> lanczos_coeffs = {
    0.99999999999999709182,     57.156235665862923517,      -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,    .33994649984811888699e-4,
    .46523628927048575665e-4,   -.98374475304879564677e-4,  .15808870322491248884e-3,
    -.21026444172410488319e-3,  .21743961811521264320e-3,   -.16431810653676389022e-3,
    .84418223983852743293e-4,   -.26190838401581408670e-4,  .36899182659531622704e-5};

inline double lanczos_sum(double z) {
    double s = lanczos_coeffs[0];
    for (int k = 1; k < 15; ++k) s += lanczos_coeffs[k] / (z + k);
    return s;
}

inline constexpr double half_log_two_pi = 0.91893853320467274178032973640562;
inline constexpr double gamma_overflow = 171.61447887182298;

// (n-1)! for n = 1..23 is exact in binary64.
inline constexpr std::array<double, 23> factorials = {
    1.0, 1.0, 2.0, 6.0, 24.0, 120.0, 720.0, 5040.0, 40320.0, 362880.0, 3628800.0,
    39916800.0, 479001600.0, 6227020800.0, 87178291200.0, 1307674368000.0,
    20922789888000.0, 355687428096000.0, 6402373705728000.0, 121645100408832000.0,
    2432902008176640000.0, 51090942171709440000.0, 1124000727777607680000.0};

}  // namespace detail

/// Gamma function. Throws DomainError at the poles and on overflow (x > 171.6).
inline double gamma(double x) {
    if (!std::isfinite(x)) throw DomainError("gamma: non-finite argument");
    if (is_nonpositive_integer(x)) throw DomainError("gamma: pole at non-positive integer");
    if (x < 0.5) return pi / (sin_pi(x) * gamma(1.0 - x));
    if (x > detail::gamma_overflow) throw DomainError("gamma: result overflows");
    if (x == std::floor(x) && x <= 23.0) return detail::factorials[static_cast<int>(x) - 1];
    const double z = x - 1.0;
    const double t = z + detail::lanczos_g + 0.5;
    const double half_power = std::pow(t, 0.5 * (z + 0.5));  // split so t^(z+1/2) cannot overflow
    return std::sqrt(2.0 * pi) * half_power * (std::exp(-t) * half_power) * detail::lanczos_sum(z);
}

/// ln Gamma(x) for x > 0.
inline double log_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("log_gamma: requires finite x > 0");
    if (x < 15.0) return std::log(gamma(x));
    const double z = x - 1.0;
    const double t = z + detail::lanczos_g + 0.5;
    return detail::half_log_two_pi + (z + 0.5) * std::log(t) - t + std::log(detail::lanczos_sum(z));
}

/// 1/Gamma(x); entire, so it returns 0 at the poles of Gamma instead of throwing.
inline double rgamma(double x) {
    if (!std::isfinite(x)) throw DomainError("rgamma: non-finite argument");
    if (is_nonpositive_integer(x)) return 0.0;
    if (x > detail::gamma_overflow) return std::exp(-log_gamma(x));
    if (x < 0.5 && 1.0 - x > detail::gamma_overflow) {
        const double s = sin_pi(x);
        const double mag = std::exp(std::log(std::abs(s)) + log_gamma(1.0 - x) - std::log(pi));
        return std::copysign(mag, s);
    }
    return 1.0 / gamma(x);
}

/// Euler Beta function B(a, b) for a, b > 0.
inline double beta(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("beta: requires a, b > 0");
    if (a + b < detail::gamma_overflow && a > 1e-300 && b > 1e-300)
        return gamma(a) * gamma(b) / gamma(a + b);
    return std::exp(log_gamma(a) + log_gamma(b) - log_gamma(a + b));
}

/// Parameters (alpha, beta) of E_{alpha,beta}.
struct MLParams {
    double alpha = 1.0;
    double beta = 1.0;
    friend bool operator==(const MLParams&, const MLParams&) = default;
};

namespace detail {

struct Attempt {
    double value = std::numeric_limits<double>::quiet_NaN();
    bool certified = false;
};

// Target for each route; the public contract is 1e-10 relative.
inline constexpr double ml_certify_tol = 1e-12;

inline Attempt ml_series(double alpha, double beta, double z) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double az = std::abs(z);
    const double log_az = std::log(az);
    const double peak = std::pow(az, 1.0 / alpha);
    sonine::detail::CompensatedSum sum;
    double abs_sum = 0.0;
    double err = 0.0;
    for (int k = 0; k < 20000; ++k) {
        const double arg = alpha * k + beta;
        double term;
        double exponent_size = 1.0;
        if (k == 0) {
            term = rgamma(beta);
        } else if (arg > 0.0) {
            const double log_mag = k * log_az - log_gamma(arg);
            exponent_size += std::abs(log_mag) + std::abs(k * log_az);
            const double mag = std::exp(log_mag);
            term = (z < 0.0 && (k % 2 == 1)) ? -mag : mag;
        } else {
            term = std::pow(z, k) * rgamma(arg);
        }
        sum += term;
        abs_sum += std::abs(term);
        err += std::abs(term) * eps * exponent_size;
        if (!std::isfinite(abs_sum)) return {};
        if (k > peak + 2.0 && std::abs(term) <= 1e-17 * abs_sum) {
            const double v = sum.value();
            return {v, err <= ml_certify_tol * std::abs(v)};
        }
    }
    return {};
}

// E_{alpha,beta}(-x) ~ sum_{k>=1} (-1)^{k+1} x^{-k} / Gamma(beta - alpha k), 0 < alpha < 1.
// Truncation follows the envelope |1/Gamma(beta - alpha k)| <= Gamma(1 - beta + alpha k) / pi,
// so coefficients that happen to sit near a pole of Gamma do not stop the sum early.
inline Attempt ml_asymptotic(double alpha, double beta, double x) {
    sonine::detail::CompensatedSum sum;
    const double log_x = std::log(x);
    double prev_env = std::numeric_limits<double>::infinity();
    double last_env = std::numeric_limits<double>::infinity();
    bool any = false;
    for (int k = 1; k < 400; ++k) {
        const double g_arg = 1.0 - beta + alpha * k;
        const double env = g_arg > 0.0 ? std::exp(log_gamma(g_arg) - k * log_x) / pi
                                       : std::numeric_limits<double>::infinity();
        if (std::isfinite(env) && std::isfinite(prev_env) && env > prev_env) break;  // optimal truncation
        const double r = rgamma(beta - alpha * k);
        if (!std::isfinite(r)) break;
        const double term = ((k % 2 == 1) ? 1.0 : -1.0) * std::exp(std::log(std::abs(r)) - k * log_x);
        if (r != 0.0) sum += r > 0.0 ? term : -term;
        any = true;
        prev_env = env;
        last_env = env;
        if (env < 1e-17 * std::abs(sum.value())) break;
    }
    if (!any) return {};
    const double v = sum.value();
    return {v, last_env <= 1e-13 * std::abs(v)};
}

// Hankel contour collapsed onto the negative real axis, valid for 0 < alpha < 1,
// beta < 1 + alpha, x > 0. With u = r^alpha and then s = u^(1+c), c = (1-beta)/alpha:
//   E(-x) = 1/(pi alpha (1+c)) int_0^inf e^{-u^{1/alpha}} [u sin(pi beta) + x sin(pi(beta-alpha))]
//                                     / [(u-x)^2 + 2xu(1+cos(pi alpha))] ds
inline Attempt ml_integral(double alpha, double beta, double x) {
    const double c = (1.0 - beta) / alpha;
    const double expo = 1.0 / (1.0 + c);
    const double sb = sin_pi(beta);
    const double sba = sin_pi(beta - alpha);
    const double half_cos = cos_pi(0.5 * alpha);
    const double one_plus_cos = 2.0 * half_cos * half_cos;
    auto integrand = [&](double s) {
        if (s <= 0.0) return 0.0;
        const double u = std::pow(s, expo);
        const double r = std::pow(u, 1.0 / alpha);
        if (r > 745.0) return 0.0;
        const double num = u * sb + x * sba;
        const double den = (u - x) * (u - x) + 2.0 * x * u * one_plus_cos;
        return std::exp(-r) * num / den;
    };
    const double r_max = 60.0;
    const double u_max = std::pow(r_max, alpha);
    const double s_max = std::pow(u_max, 1.0 + c);
    const double s_peak = std::pow(x, 1.0 + c);
    constexpr double tol = 1e-14;
    sonine::detail::AdaptiveResult total;
    if (s_peak < s_max) {
        auto lo = sonine::detail::adaptive_gk15(integrand, 0.0, s_peak, tol, 1e-300);
        auto hi = sonine::detail::adaptive_gk15(integrand, s_peak, s_max, tol, 1e-300);
        total = {lo.value + hi.value, lo.error + hi.error, lo.converged && hi.converged};
    } else {
        total = sonine::detail::adaptive_gk15(integrand, 0.0, s_max, tol, 1e-300);
    }
    const double v = total.value / (pi * alpha * (1.0 + c));
    return {v, total.converged || total.error <= ml_certify_tol * std::abs(total.value)};
}

}  // namespace detail

/**
 * @brief Two-parameter Mittag-Leffler function E_{alpha,beta}(z) for real z.
 *
 * Routes, tried in order for z < 0 and 0 < alpha < 1: power series (|z| <= 5),
 * asymptotic expansion (|z| >= 30), the real-axis integral representation
 * (beta < 1 + alpha). Each route certifies its own rounding/truncation estimate;
 * if none can, ConvergenceError is raised. alpha >= 1 and z > 0 use the series only,
 * except for the closed forms E_{1,1} = exp and E_{1,2}(z) = (e^z - 1)/z.
 */
inline double mittag_leffler(MLParams params, double z) {
    const double alpha = params.alpha;
    const double beta = params.beta;
    if (!(alpha > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta))
        throw DomainError("mittag_leffler: requires alpha > 0 and finite beta");
    if (!std::isfinite(z)) throw DomainError("mittag_leffler: non-finite argument");
    if (z == 0.0) return rgamma(beta);
    if (alpha == 1.0 && beta == 1.0) return std::exp(z);
    if (alpha == 1.0 && beta == 2.0) return std::expm1(z) / z;

    if (z > 0.0 || alpha >= 1.0) {
        auto s = detail::ml_series(alpha, beta, z);
        if (s.certified) return s.value;
        throw ConvergenceError("mittag_leffler: series cannot certify the tolerance");
    }

    const double x = -z;
    if (x <= 5.0) {
        auto s = detail::ml_series(alpha, beta, z);
        if (s.certified) return s.value;
    }
    bool tried_asymptotic = false;
    if (x >= 30.0) {
        tried_asymptotic = true;
        auto a = detail::ml_asymptotic(alpha, beta, x);
        if (a.certified) return a.value;
    }
    if (beta < 1.0 + alpha) {
        auto i = detail::ml_integral(alpha, beta, x);
        if (i.certified) return i.value;
    }
    if (!tried_asymptotic) {
        auto a = detail::ml_asymptotic(alpha, beta, x);
        if (a.certified) return a.value;
    }
    throw ConvergenceError("mittag_leffler: no evaluation route certified the tolerance");
}

namespace detail {

// Continued fraction for e^x x^-s Gamma(s, x) (modified Lentz); good for x > ~1.
inline double upper_gamma_cf(double s, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) return h;
    }
    throw ConvergenceError("upper incomplete gamma: continued fraction did not converge");
}

// -gamma - ln x - E1(x) = sum_{k>=1} (-x)^k / (k k!)
inline double e1_series(double x) {
    sonine::detail::CompensatedSum sum;
    double fact_term = 1.0;  // (-x)^k / k!
    for (int k = 1; k < 200; ++k) {
        fact_term *= -x / k;
        const double term = fact_term / k;
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum.value())) break;
    }
    return -euler_gamma - std::log(x) - sum.value();
}

}  // namespace detail

/// Exponential integral E1(x) = int_x^inf e^-u/u du for x > 0.
inline double exp_integral_e1(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("exp_integral_e1: requires x > 0");
    if (x <= 1.0) return detail::e1_series(x);
    return std::exp(-x) * detail::upper_gamma_cf(0.0, x);
}

/// e^x E1(x) for x > 0, without overflow for large x.
inline double scaled_exp_integral_e1(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("scaled_exp_integral_e1: requires x > 0");
    if (x <= 1.0) return std::exp(x) * detail::e1_series(x);
    return detail::upper_gamma_cf(0.0, x);
}

/// e^x x^-s Gamma(s, x) for real s and x > 0.
inline double upper_gamma_scaled(double s, double x) {
    if (!(x > 0.0) || !std::isfinite(x) || !std::isfinite(s))
        throw DomainError("upper_gamma_scaled: requires x > 0");
    if (x > 1.5) return detail::upper_gamma_cf(s, x);
    if (s == 0.0) return scaled_exp_integral_e1(x);
    if (s < 0.0) return (x * upper_gamma_scaled(s + 1.0, x) - 1.0) / s;
    // e^x x^-s (Gamma(s) - gamma(s, x)); gamma(s, x) = x^s e^-x sum_k x^k / (s)_{k+1}
    sonine::detail::CompensatedSum lower;
    double term = 1.0 / s;
    for (int k = 0; k < 500; ++k) {
        lower += term;
        if (std::abs(term) < 1e-18 * std::abs(lower.value())) break;
        term *= x / (s + k + 1.0);
    }
    return std::exp(x - s * std::log(x)) * gamma(s) - lower.value();
}

}  // namespace sonine::specfun
