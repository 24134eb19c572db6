#pragma once

/**
 * @file quadrature.hpp
 * @brief Gaussian rules for the Jacobi, Legendre and generalized Laguerre weights.
 *
 * Nodes start from the eigenvalues of the Jacobi matrix (Golub-Welsch), are
 * polished by Newton steps on the orthonormal three-term recurrence, and the
 * weights come from the Christoffel sum 1 / sum_k p_k(x_i)^2. The sum has only
 * positive terms, so even the tiny Laguerre tail weights carry full relative
 * accuracy, which the eigenvector formula does not give.
 *
 * Rules are cached process-wide by (kind, parameters, count). Lookups take a
 * shared lock; a miss builds the rule outside the lock and inserts it once.
 */

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Eigenvalues>

#include "sonine/detail/summation.hpp"
#include "sonine/errors.hpp"
#include "sonine/specfun.hpp"

namespace sonine::quad {

enum class RuleKind { legendre, jacobi, laguerre };

/// Which weight a rule integrates against.
///   legendre:      1 on [-1, 1]
///   jacobi(a, b):  (1-x)^a (1+x)^b on [-1, 1]
///   laguerre(a):   x^a e^-x on [0, inf)
struct RuleSpec {
    RuleKind kind = RuleKind::legendre;
    double a = 0.0;
    double b = 0.0;

    static RuleSpec legendre() { return {RuleKind::legendre, 0.0, 0.0}; }
    static RuleSpec jacobi(double a, double b) { return {RuleKind::jacobi, a, b}; }
    static RuleSpec laguerre(double a) { return {RuleKind::laguerre, a, 0.0}; }
};

struct QuadratureRule {
    RuleSpec spec;
    std::vector<double> nodes;
    std::vector<double> weights;

    int count() const { return static_cast<int>(nodes.size()); }

    template <class F>
    double integrate(F&& f) const {
        sonine::detail::CompensatedSum s;
        for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
        return s.value();
    }
};

inline constexpr int min_rule_size = 2;
inline constexpr int max_rule_size = 256;
// Beyond this the largest Laguerre weights underflow binary64.
inline constexpr int max_laguerre_size = 128;

namespace detail {

// Monic three-term recurrence p_{k+1} = (x - alpha_k) p_k - beta_k p_{k-1}, with mu0 = total mass.
struct Recurrence {
    std::vector<double> alpha;  // alpha_0 .. alpha_{n-1}
    std::vector<double> beta;   // beta_0 = mu0, beta_1 .. beta_n
};

inline Recurrence jacobi_recurrence(double a, double b, int n) {
    Recurrence r;
    r.alpha.resize(n);
    r.beta.resize(n + 1);
    r.beta[0] = std::exp2(a + b + 1.0) * specfun::beta(a + 1.0, b + 1.0);
    r.alpha[0] = (b - a) / (a + b + 2.0);
    for (int k = 1; k < n; ++k) {
        const double s = 2.0 * k + a + b;
        r.alpha[k] = (b * b - a * a) / (s * (s + 2.0));
    }
    for (int k = 1; k <= n; ++k) {
        const double s = 2.0 * k + a + b;
        if (k == 1) {
            r.beta[1] = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b) * (2.0 + a + b) * (3.0 + a + b));
        } else {
            r.beta[k] = 4.0 * k * (k + a) * (k + b) * (k + a + b) / (s * s * (s + 1.0) * (s - 1.0));
        }
    }
    return r;
}

inline Recurrence laguerre_recurrence(double a, int n) {
    Recurrence r;
    r.alpha.resize(n);
    r.beta.resize(n + 1);
    r.beta[0] = specfun::gamma(a + 1.0);
    for (int k = 0; k < n; ++k) r.alpha[k] = 2.0 * k + a + 1.0;
    for (int k = 1; k <= n; ++k) r.beta[k] = k * (k + a);
    return r;
}

// Affine image x -> (1 + x) / 2 of a recurrence on [-1, 1], so that nodes near 0 on
// the unit interval keep relative accuracy.
inline Recurrence to_unit_interval(Recurrence r, double a, double b) {
    for (auto& al : r.alpha) al = 0.5 * (1.0 + al);
    r.beta[0] /= std::exp2(a + b + 1.0);
    for (std::size_t k = 1; k < r.beta.size(); ++k) r.beta[k] *= 0.25;
    return r;
}

struct OrthoValues {
    double pn, dpn, christoffel_sum;
};

// Orthonormal recurrence at x: p_n, p_n', and sum_{k<n} p_k^2.
inline OrthoValues orthonormal_eval(const Recurrence& r, int n, double x) {
    double p_prev = 0.0, dp_prev = 0.0;
    double p = 1.0 / std::sqrt(r.beta[0]);
    double dp = 0.0;
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
        sum += p * p;
        const double sb_k = (k == 0) ? 0.0 : std::sqrt(r.beta[k]);
        const double sb_next = std::sqrt(r.beta[k + 1]);
        const double p_next = ((x - r.alpha[k]) * p - sb_k * p_prev) / sb_next;
        const double dp_next = ((x - r.alpha[k]) * dp + p - sb_k * dp_prev) / sb_next;
        p_prev = p;
        dp_prev = dp;
        p = p_next;
        dp = dp_next;
    }
    return {p, dp, sum};
}

inline QuadratureRule build_rule(const Recurrence& r, int n, RuleSpec spec, double lo, double hi) {
    Eigen::VectorXd diag(n);
    Eigen::VectorXd sub(std::max(n - 1, 0));
    for (int k = 0; k < n; ++k) diag(k) = r.alpha[k];
    for (int k = 1; k < n; ++k) sub(k - 1) = std::sqrt(r.beta[k]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw ConvergenceError("gauss_rule: eigenvalue solver failed");

    QuadratureRule rule;
    rule.spec = spec;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = solver.eigenvalues()(i);
        for (int it = 0; it < 8; ++it) {
            const auto v = orthonormal_eval(r, n, x);
            if (v.dpn == 0.0) break;
            const double dx = v.pn / v.dpn;
            x -= dx;
            if (std::abs(dx) <= 1e-16 * std::max(std::abs(x), 1e-300)) break;
        }
        const auto v = orthonormal_eval(r, n, x);
        rule.nodes[i] = x;
        rule.weights[i] = 1.0 / v.christoffel_sum;
    }
    for (int i = 0; i < n; ++i) {
        if (!(rule.weights[i] > 0.0) || !std::isfinite(rule.weights[i]))
            throw ConvergenceError("gauss_rule: non-positive or non-finite weight");
        if (!(rule.nodes[i] > lo && rule.nodes[i] < hi))
            throw ConvergenceError("gauss_rule: node outside the open interval");
        if (i > 0 && !(rule.nodes[i] > rule.nodes[i - 1]))
            throw ConvergenceError("gauss_rule: nodes not strictly increasing");
    }
    return rule;
}

inline void validate(RuleSpec spec, int count) {
    if (count < min_rule_size || count > max_rule_size)
        throw DomainError("gauss_rule: count must lie in [2, 256], got " + std::to_string(count));
    if (spec.kind == RuleKind::laguerre && count > max_laguerre_size)
        throw DomainError("gauss_rule: laguerre rules are limited to 128 nodes");
    if (spec.kind == RuleKind::jacobi && !(spec.a > -1.0 && spec.b > -1.0))
        throw DomainError("gauss_rule: jacobi exponents must exceed -1");
    if (spec.kind == RuleKind::laguerre && !(spec.a > -1.0))
        throw DomainError("gauss_rule: laguerre exponent must exceed -1");
}

/// Build without caching.
inline QuadratureRule make_rule(RuleSpec spec, int count, bool unit_interval = false) {
    validate(spec, count);
    switch (spec.kind) {
        case RuleKind::legendre:
        case RuleKind::jacobi: {
            const double a = spec.kind == RuleKind::legendre ? 0.0 : spec.a;
            const double b = spec.kind == RuleKind::legendre ? 0.0 : spec.b;
            auto rec = jacobi_recurrence(a, b, count);
            if (unit_interval) return build_rule(to_unit_interval(rec, a, b), count, spec, 0.0, 1.0);
            return build_rule(rec, count, spec, -1.0, 1.0);
        }
        case RuleKind::laguerre:
            return build_rule(laguerre_recurrence(spec.a, count), count, spec, 0.0,
                              std::numeric_limits<double>::infinity());
    }
    throw DomainError("gauss_rule: unknown kind");
}

class RuleCache {
public:
    const QuadratureRule& get(RuleSpec spec, int count, bool unit) {
        const Key key{static_cast<int>(spec.kind), spec.a, spec.b, count, unit};
        {
            std::shared_lock lock(mutex_);
            if (auto it = rules_.find(key); it != rules_.end()) return *it->second;
        }
        auto built = std::make_unique<QuadratureRule>(make_rule(spec, count, unit));
        std::unique_lock lock(mutex_);
        auto [it, inserted] = rules_.try_emplace(key, std::move(built));
        return *it->second;
    }

private:
    using Key = std::tuple<int, double, double, int, bool>;
    std::shared_mutex mutex_;
    std::map<Key, std::unique_ptr<QuadratureRule>> rules_;
};

inline RuleCache& rule_cache() {
    static RuleCache cache;
    return cache;
}

}  // namespace detail

/// Cached Gaussian rule on the canonical interval of its weight.
inline const QuadratureRule& gauss_rule(RuleSpec spec, int count) {
    return detail::rule_cache().get(spec, count, false);
}

/**
 * Gauss-Jacobi rule for int_0^1 (1-v)^a v^b F(v) dv, built directly on [0, 1].
 * Note the exponent order: `a` belongs to the endpoint v = 1 and `b` to v = 0,
 * mirroring the (1-x)^a (1+x)^b convention on [-1, 1].
 */
inline const QuadratureRule& unit_jacobi(double a, double b, int count) {
    return detail::rule_cache().get(RuleSpec::jacobi(a, b), count, true);
}

/// Gauss-Legendre on [0, 1].
inline const QuadratureRule& unit_legendre(int count) {
    return detail::rule_cache().get(RuleSpec::legendre(), count, true);
}

}  // namespace sonine::quad
