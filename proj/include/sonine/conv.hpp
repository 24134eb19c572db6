#pragma once

/**
 * @file conv.hpp
 * @brief Singular convolutions, generalized fractional operators and Sonine residuals.
 *
 * (g*f)(t) is split at t/2 so that each half has a single singular endpoint:
 *
 *   (g*f)(t) = int_0^{t/2} g(s) f(t-s) ds + int_0^{t/2} f(s) g(t-s) ds
 *
 * and each half is an endpoint integral driven by the singular descriptor of
 * the kernel that sits at s = 0. The split makes the result exactly symmetric
 * in g and f.
 */

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "sonine/detail/endpoint.hpp"
#include "sonine/errors.hpp"
#include "sonine/kernel.hpp"
#include "sonine/quadrature.hpp"

namespace sonine {

inline constexpr int default_rule_size = 64;

/// A function on (0, inf) together with its behaviour at 0.
struct Integrand {
    std::function<double(double)> fn;
    Singularity sing;

    double operator()(double t) const { return fn(t); }
};

inline Integrand as_integrand(const Kernel& k) {
    return {[k](double t) { return k.eval(t); }, k.singularity()};
}

/// A function smooth on [0, inf), such as a test function phi.
inline Integrand smooth_integrand(std::function<double(double)> fn) { return {std::move(fn), Singularity{}}; }

struct TestFunction {
    std::function<double(double)> value;
    std::function<double(double)> derivative;
};

struct ResidualPoint {
    double x = 0.0;  // t or p
    double value = 0.0;
    double residual = 0.0;
};

struct ResidualReport {
    std::vector<ResidualPoint> points;
    double max_abs_residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;

    void add(double x, double value, double residual) {
        points.push_back({x, value, residual});
        const double a = std::abs(residual);
        if (std::isnan(a) || a > max_abs_residual) max_abs_residual = a;  // a NaN sticks and fails the report
    }

    ResidualReport& finish(double tol) {
        tolerance = tol;
        passed = !points.empty() && max_abs_residual <= tol;
        return *this;
    }
};

namespace detail {

inline void check_rule_size(int n) {
    if (n < quad::min_rule_size || n > quad::max_rule_size)
        throw DomainError("rule_size must lie in [2, 256], got " + std::to_string(n));
}

inline void check_ts(const std::vector<double>& ts) {
    if (ts.empty()) throw DomainError("sample list is empty");
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (!(ts[i] > 0.0)) throw DomainError("sample points must be positive");
        if (i > 0 && !(ts[i] > ts[i - 1])) throw DomainError("sample points must be ascending");
    }
}

}  // namespace detail

/// (g*f)(t) for two integrands with known behaviour at 0.
inline double convolve(const Integrand& g, const Integrand& f, double t, int rule_size = default_rule_size) {
    if (!(t > 0.0)) throw DomainError("convolve: t must be positive");
    detail::check_rule_size(rule_size);
    const double X = 0.5 * t;
    const double left =
        detail::endpoint_integral(g.fn, g.sing, [&](double s) { return f.fn(t - s); }, X, rule_size);
    const double right =
        detail::endpoint_integral(f.fn, f.sing, [&](double s) { return g.fn(t - s); }, X, rule_size);
    return left + right;
}

inline double convolve_singular(const Kernel& g, const Kernel& f, double t, int rule_size = default_rule_size) {
    return convolve(as_integrand(g), as_integrand(f), t, rule_size);
}

inline ResidualReport sonine_residual(const SoninePair& pair, const std::vector<double>& ts,
                                      int rule_size = default_rule_size, double tol = 1e-6) {
    detail::check_ts(ts);
    const Integrand g = as_integrand(pair.g);
    const Integrand f = as_integrand(pair.f);
    ResidualReport r;
    for (double t : ts) {
        const double v = convolve(g, f, t, rule_size);
        r.add(t, v, v - 1.0);
    }
    return r.finish(tol);
}

/// s -> d/ds (k * phi)(s) = k(s) phi(0) + (k * phi')(s); behaves like k at 0.
inline Integrand derivative_of_convolution(const Kernel& k, const TestFunction& phi, int rule_size) {
    const double phi0 = phi.value(0.0);
    Integrand ki = as_integrand(k);
    Integrand dphi = smooth_integrand(phi.derivative);
    Integrand out;
    out.fn = [ki, dphi, phi0, rule_size](double s) { return ki(s) * phi0 + convolve(ki, dphi, s, rule_size); };
    out.sing = k.singularity();
    if (out.sing.logarithmic()) {
        auto head = out.sing.head_mass;
        out.sing.head_mass = [head, phi0](double eps) { return phi0 * head(eps); };
    }
    return out;
}

/// D_g phi (t) = g(t) phi(0) + (g * phi')(t)
inline double gfd_apply(const Kernel& g, const TestFunction& phi, double t, int rule_size = default_rule_size) {
    if (!(t > 0.0)) throw DomainError("gfd_apply: t must be positive");
    return g.eval(t) * phi.value(0.0) + convolve(as_integrand(g), smooth_integrand(phi.derivative), t, rule_size);
}

/// I_f phi (t) = (f * phi)(t)
inline double gfi_apply(const Kernel& f, const std::function<double(double)>& phi, double t,
                        int rule_size = default_rule_size) {
    return convolve(as_integrand(f), smooth_integrand(phi), t, rule_size);
}

/**
 * Residuals of D_g I_f phi = phi, I_f D_g phi = phi and their commutation.
 * Each point stores D_g I_f phi as its value and the largest of the three
 * deviations as its residual.
 */
inline ResidualReport operator_identity_check(const SoninePair& pair, const TestFunction& phi,
                                              const std::vector<double>& ts, double tol,
                                              int rule_size = default_rule_size) {
    detail::check_ts(ts);
    const Integrand g = as_integrand(pair.g);
    const Integrand f = as_integrand(pair.f);
    const Integrand df = derivative_of_convolution(pair.f, phi, rule_size);
    const Integrand dg = derivative_of_convolution(pair.g, phi, rule_size);
    ResidualReport r;
    for (double t : ts) {
        const double dgif = convolve(g, df, t, rule_size);
        const double ifdg = convolve(f, dg, t, rule_size);
        const double p = phi.value(t);
        const double res = std::max({std::abs(dgif - p), std::abs(ifdg - p), std::abs(dgif - ifdg)});
        r.add(t, dgif, res);
    }
    return r.finish(tol);
}

/// n points log-spaced on [lo, hi] (a single point when n == 1).
inline std::vector<double> logspace(double lo, double hi, int n) {
    if (!(lo > 0.0 && hi >= lo) || n < 1) throw DomainError("logspace: need 0 < lo <= hi and n >= 1");
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    // base 10 so that decade-aligned grids hit powers of ten exactly
    const double a = std::log10(lo), b = std::log10(hi);
    for (int i = 0; i < n; ++i) out[i] = std::pow(10.0, a + (b - a) * i / (n - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

}  // namespace sonine
