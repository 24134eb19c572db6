#pragma once

/**
 * @file diagnostics.hpp
 * @brief Sampled admissibility checks for kernels.
 *
 * None of these prove anything. Complete monotonicity is tested up to a finite
 * order with forward differences, which keep the sign pattern of a completely
 * monotone function for every step h. The singularity checks look at decade
 * samples toward 0.
 */

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "sonine/errors.hpp"
#include "sonine/kernel.hpp"

namespace sonine {

struct CMViolation {
    int order = 0;
    double t = 0.0;
    double value = 0.0;  // (-1)^n Delta_h^n k(t)
};

struct CMReport {
    int max_order_checked = 0;
    std::optional<CMViolation> first_violation;
    bool passed = false;
};

inline constexpr int max_cm_order = 8;

/**
 * (-1)^n Delta_h^n k(t) >= -1e-9 |k(t)| for n = 0..max_order at each grid point.
 * Orders are scanned from low to high, so the reported violation has the
 * smallest failing order.
 */
inline CMReport cm_finite_difference_test(const Kernel& k, const std::vector<double>& t_grid, double h,
                                          int max_order) {
    if (t_grid.empty()) throw DomainError("cm test: empty grid");
    if (!(h > 0.0)) throw DomainError("cm test: step must be positive");
    if (max_order < 0 || max_order > max_cm_order) throw DomainError("cm test: order must lie in [0, 8]");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > 0.0)) throw DomainError("cm test: grid points must be positive");
        if (i > 0 && !(t_grid[i] > t_grid[i - 1])) throw DomainError("cm test: grid must be ascending");
    }

    std::vector<std::vector<double>> samples;
    samples.reserve(t_grid.size());
    for (double t : t_grid) {
        std::vector<double> row(max_order + 1);
        for (int j = 0; j <= max_order; ++j) row[j] = k.eval(t + j * h);
        samples.push_back(std::move(row));
    }

    CMReport report;
    report.max_order_checked = max_order;
    for (int n = 0; n <= max_order; ++n) {
        for (std::size_t i = 0; i < t_grid.size(); ++i) {
            const auto& v = samples[i];
            // (-1)^n Delta^n = sum_j (-1)^j C(n, j) v_j
            double binom = 1.0, diff = 0.0;
            for (int j = 0; j <= n; ++j) {
                diff += (j % 2 ? -binom : binom) * v[j];
                binom = binom * (n - j) / (j + 1);
            }
            if (!(diff >= -1e-9 * std::abs(v[0]))) {
                report.first_violation = CMViolation{n, t_grid[i], diff};
                report.passed = false;
                return report;
            }
        }
    }
    report.passed = true;
    return report;
}

struct SingularitySample {
    double t = 0.0;
    double k = 0.0;
    double tk = 0.0;
};

struct SingularityReport {
    bool grows_unboundedly = false;
    bool t_times_k_to_zero = false;
    std::vector<SingularitySample> samples;
};

/**
 * Samples t = 10^-j, j = 1..decades.
 *
 * grows_unboundedly: k strictly increases as t decreases, and the increase over
 * the last decade is at least half the increase over the first. A bounded
 * kernel's increments shrink geometrically; a power or logarithmic singularity
 * keeps them from shrinking.
 *
 * t_times_k_to_zero: t k(t) strictly decreases as t decreases, and still drops
 * by at least 10% over the last decade.
 */
inline SingularityReport singularity_limit_test(const Kernel& k, int decades) {
    if (decades < 4 || decades > 12) throw DomainError("singularity test: decades must lie in [4, 12]");
    SingularityReport r;
    for (int j = 1; j <= decades; ++j) {
        const double t = std::pow(10.0, -j);
        const double v = k.eval(t);
        if (!std::isfinite(v)) throw ConvergenceError("singularity test: non-finite kernel value");
        r.samples.push_back({t, v, t * v});
    }
    const auto& s = r.samples;
    bool increasing = true, decreasing = true;
    for (std::size_t i = 1; i < s.size(); ++i) {
        increasing = increasing && s[i].k > s[i - 1].k;
        decreasing = decreasing && s[i].tk < s[i - 1].tk;
    }
    const std::size_t n = s.size();
    const double first_rise = s[1].k - s[0].k;
    const double last_rise = s[n - 1].k - s[n - 2].k;
    r.grows_unboundedly = increasing && last_rise >= 0.5 * first_rise;
    r.t_times_k_to_zero = decreasing && s[n - 1].tk <= 0.9 * s[n - 2].tk;
    return r;
}

/// Least-squares slope of ln k against ln t on log-spaced samples in [t_lo, t_hi].
inline double rv_index_estimate(const Kernel& k, double t_lo, double t_hi, int points) {
    if (!(t_lo > 0.0 && t_lo < t_hi && t_hi <= 1e-2)) throw DomainError("rv index: need 0 < t_lo < t_hi <= 1e-2");
    if (points < 8) throw DomainError("rv index: need at least 8 points");
    const double a = std::log(t_lo), b = std::log(t_hi);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < points; ++i) {
        const double x = a + (b - a) * i / (points - 1);
        const double v = k.eval(std::exp(x));
        if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("rv index: kernel must be positive on the window");
        const double y = std::log(v);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = points * sxx - sx * sx;
    if (!(std::abs(denom) > 0.0)) throw DomainError("rv index: degenerate fit");
    return (points * sxy - sx * sy) / denom;
}

enum class LogKernel { w, v };

/**
 * w(t) t (ln t)^2 for w, and v(t) / (-ln t) for v. Both tend to 1 as t -> 0,
 * slowly: the corrections are O(1 / ln t).
 */
inline double log_asymptotics_check(LogKernel which, double t_probe) {
    if (!(t_probe >= 1e-10 && t_probe <= 1e-4)) throw DomainError("log asymptotics: t must lie in [1e-10, 1e-4]");
    const double lt = std::log(t_probe);
    if (which == LogKernel::w) return Kernel(kernels::DistributedOrderW{}).eval(t_probe) * t_probe * lt * lt;
    return Kernel(kernels::DistributedOrderV{}).eval(t_probe) / (-lt);
}

}  // namespace sonine
