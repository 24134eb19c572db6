#pragma once

/**
 * @file kernel.hpp
 * @brief Kernel catalog, pointwise evaluation and Sonine pairs.
 *
 * A Kernel is an immutable tagged union over the closed-form catalog plus a
 * generic fractional power series. Each kernel carries a Singularity
 * descriptor that the quadrature code uses to pick its weights: for power
 * singularities, t^lambda k(t) is bounded near 0 and expands in powers of
 * t^step for the listed steps.
 */

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "sonine/errors.hpp"
#include "sonine/frac_series.hpp"
#include "sonine/quadrature.hpp"
#include "sonine/specfun.hpp"

namespace sonine {

struct Singularity {
    enum class Kind { power, logarithmic };
    Kind kind = Kind::power;
    // lambda with t^lambda k(t) bounded near 0; unused for the logarithmic kind.
    double exponent = 0.0;
    // Non-integer exponents generating the expansion of t^lambda k(t) at 0.
    std::vector<double> steps;
    // False when the steps are unknown (e.g. numerically recovered functions).
    bool expansion_known = true;
    // eps -> int_0^eps k(s) ds; required for the logarithmic kind.
    std::function<double(double)> head_mass;

    bool logarithmic() const { return kind == Kind::logarithmic; }
};

/// theta^alpha(t) = t^alpha / Gamma(1 + alpha)
inline double theta(double alpha, double t) {
    if (!(t > 0.0)) throw DomainError("theta: t must be positive");
    if (!(alpha > -1.0)) throw DomainError("theta: alpha must exceed -1");
    return std::pow(t, alpha) * specfun::rgamma(1.0 + alpha);
}

namespace kernels {

struct PowerLaw { double alpha; };                // theta^{-alpha}
struct MLKernel { double alpha, beta; };          // t^{beta-1} E_{alpha,beta}(-t^alpha)
struct MLAssociate { double alpha, beta; };       // t^{-beta}/G(1-beta) + t^{alpha-beta}/G(alpha-beta+1)
struct DistributedOrderW {};                      // int_0^1 t^{a-1}/G(a) da
struct DistributedOrderV {};                      // e^t E1(t)
struct Shifted { double alpha, a; };              // a^alpha + e^{-at} theta^{-alpha} Phi(t, a, alpha)
struct ShiftedAssociate { double alpha, a; };     // e^{-at} theta^{alpha-1}
struct CosCounterexample {};                      // (pi t)^{-1/2} cos(2 sqrt t)
struct CoshCounterexample {};                     // (pi t)^{-1/2} cosh(2 sqrt t)
struct ExpDamped { double alpha, beta; };         // t^{-alpha} exp(-t^beta)
struct Series { FracSeries series; };

}  // namespace kernels

using KernelForm = std::variant<kernels::PowerLaw, kernels::MLKernel, kernels::MLAssociate,
                                kernels::DistributedOrderW, kernels::DistributedOrderV, kernels::Shifted,
                                kernels::ShiftedAssociate, kernels::CosCounterexample,
                                kernels::CoshCounterexample, kernels::ExpDamped, kernels::Series>;

namespace detail {

inline constexpr int dist_order_nodes = 64;

// int_0^1 t^{a-1} / Gamma(a) da
inline double dist_order_w(double t) {
    const auto& rule = quad::unit_legendre(dist_order_nodes);
    const double lt = std::log(t);
    CompensatedSum s;
    for (int i = 0; i < rule.count(); ++i) {
        const double a = rule.nodes[i];
        s += rule.weights[i] * std::exp((a - 1.0) * lt) * specfun::rgamma(a);
    }
    return s.value();
}

// int_0^eps w(s) ds = int_0^1 eps^a / Gamma(1 + a) da
inline double dist_order_w_head(double eps) {
    const auto& rule = quad::unit_legendre(dist_order_nodes);
    const double le = std::log(eps);
    CompensatedSum s;
    for (int i = 0; i < rule.count(); ++i) {
        const double a = rule.nodes[i];
        s += rule.weights[i] * std::exp(a * le) * specfun::rgamma(1.0 + a);
    }
    return s.value();
}

// int_0^eps e^s E1(s) ds = e^eps E1(eps) + ln(eps) + gamma
inline double dist_order_v_head(double eps) {
    if (eps > 0.5) return specfun::scaled_exp_integral_e1(eps) + std::log(eps) + specfun::euler_gamma;
    // E1(x) = -gamma - ln x - sum_k (-x)^k / (k k!)
    double term = 1.0, tail = 0.0;
    for (int k = 1; k < 60; ++k) {
        term *= -eps / k;
        const double add = term / k;
        tail += add;
        if (std::abs(add) < 1e-18 * std::abs(tail)) break;
    }
    const double lead = -specfun::euler_gamma - std::log(eps);
    return std::expm1(eps) * lead - std::exp(eps) * tail;
}

// Phi(t, a, alpha) as a function of x = a t: 1 - x^alpha e^x Gamma(1 - alpha, x).
inline double shifted_phi(double x, double alpha) {
    if (x == 0.0) return 1.0;
    if (x > 1.5) return alpha * specfun::upper_gamma_scaled(-alpha, x);
    return 1.0 - x * specfun::upper_gamma_scaled(1.0 - alpha, x);
}

inline void require(bool ok, const char* what) {
    if (!ok) throw DomainError(what);
}

}  // namespace detail

class Kernel {
public:
    explicit Kernel(KernelForm form) : form_(std::move(form)) { sing_ = validate_and_describe(form_); }

    const KernelForm& form() const { return form_; }
    const Singularity& singularity() const { return sing_; }
    double sing_exponent() const { return sing_.exponent; }
    bool logarithmic() const { return sing_.logarithmic(); }

    template <class T>
    bool is() const {
        return std::holds_alternative<T>(form_);
    }

    double operator()(double t) const { return eval(t); }

    double eval(double t) const {
        if (!(t > 0.0)) throw DomainError("kernel eval: t must be positive");
        using namespace kernels;
        return std::visit(
            [t](const auto& k) -> double {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, PowerLaw>) {
                    return theta(-k.alpha, t);
                } else if constexpr (std::is_same_v<K, MLKernel>) {
                    return std::pow(t, k.beta - 1.0) *
                           specfun::mittag_leffler({k.alpha, k.beta}, -std::pow(t, k.alpha));
                } else if constexpr (std::is_same_v<K, MLAssociate>) {
                    return std::pow(t, -k.beta) * specfun::rgamma(1.0 - k.beta) +
                           std::pow(t, k.alpha - k.beta) * specfun::rgamma(k.alpha - k.beta + 1.0);
                } else if constexpr (std::is_same_v<K, DistributedOrderW>) {
                    return detail::dist_order_w(t);
                } else if constexpr (std::is_same_v<K, DistributedOrderV>) {
                    return specfun::scaled_exp_integral_e1(t);
                } else if constexpr (std::is_same_v<K, Shifted>) {
                    // a^alpha is the residue at p = 0 of e^{pt} (p + a)^alpha / p
                    return std::pow(k.a, k.alpha) +
                           std::exp(-k.a * t) * theta(-k.alpha, t) * detail::shifted_phi(k.a * t, k.alpha);
                } else if constexpr (std::is_same_v<K, ShiftedAssociate>) {
                    return std::exp(-k.a * t) * theta(k.alpha - 1.0, t);
                } else if constexpr (std::is_same_v<K, CosCounterexample>) {
                    return std::cos(2.0 * std::sqrt(t)) / std::sqrt(specfun::pi * t);
                } else if constexpr (std::is_same_v<K, CoshCounterexample>) {
                    return std::cosh(2.0 * std::sqrt(t)) / std::sqrt(specfun::pi * t);
                } else if constexpr (std::is_same_v<K, ExpDamped>) {
                    return std::pow(t, -k.alpha) * std::exp(-std::pow(t, k.beta));
                } else {
                    return eval_series(k.series, t);
                }
            },
            form_);
    }

    /// t^lambda k(t), the factor that stays bounded at 0 (power kind only).
    double regular_part(double t) const {
        if (sing_.logarithmic()) throw UnsupportedKernelError("regular_part: logarithmic kernel");
        return std::pow(t, sing_.exponent) * eval(t);
    }

private:
    static Singularity power(double lambda, std::vector<double> steps = {}) {
        Singularity s;
        s.exponent = lambda;
        s.steps = std::move(steps);
        return s;
    }

    static Singularity validate_and_describe(const KernelForm& form) {
        using namespace kernels;
        using detail::require;
        return std::visit(
            [](const auto& k) -> Singularity {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, PowerLaw>) {
                    require(k.alpha < 1.0, "powerlaw: alpha must be below 1");
                    return power(k.alpha);
                } else if constexpr (std::is_same_v<K, MLKernel> || std::is_same_v<K, MLAssociate>) {
                    require(k.alpha > 0.0 && k.alpha <= 1.0, "ml: alpha must lie in (0, 1]");
                    if constexpr (std::is_same_v<K, MLKernel>) {
                        require(k.beta > 0.0, "ml: beta must be positive");
                        return power(1.0 - k.beta, {k.alpha});
                    } else {
                        require(k.beta >= 0.0 && k.beta < 1.0, "ml-assoc: beta must lie in [0, 1)");
                        return power(k.beta, {k.alpha});
                    }
                } else if constexpr (std::is_same_v<K, DistributedOrderW>) {
                    Singularity s;
                    s.kind = Singularity::Kind::logarithmic;
                    s.head_mass = detail::dist_order_w_head;
                    return s;
                } else if constexpr (std::is_same_v<K, DistributedOrderV>) {
                    Singularity s;
                    s.kind = Singularity::Kind::logarithmic;
                    s.head_mass = detail::dist_order_v_head;
                    return s;
                } else if constexpr (std::is_same_v<K, Shifted>) {
                    require(k.alpha > 0.0 && k.alpha < 1.0, "shifted: alpha must lie in (0, 1)");
                    require(k.a >= 0.0, "shifted: a must be non-negative");
                    return power(k.alpha, {k.alpha});
                } else if constexpr (std::is_same_v<K, ShiftedAssociate>) {
                    require(k.alpha > 0.0, "shifted-assoc: alpha must be positive");
                    require(k.a >= 0.0, "shifted-assoc: a must be non-negative");
                    return power(1.0 - k.alpha);
                } else if constexpr (std::is_same_v<K, CosCounterexample> ||
                                     std::is_same_v<K, CoshCounterexample>) {
                    return power(0.5);
                } else if constexpr (std::is_same_v<K, ExpDamped>) {
                    require(k.alpha < 1.0, "expbeta: alpha must be below 1");
                    require(k.beta > 0.0, "expbeta: beta must be positive");
                    return power(k.alpha, {k.beta});
                } else {
                    k.series.validate();
                    return power(-k.series.lead, {k.series.step});
                }
            },
            form);
    }

    KernelForm form_;
    Singularity sing_;
};

inline Kernel make_kernel(KernelForm form) { return Kernel(std::move(form)); }

/// Exact g(0+) when it is finite and known from the closed form.
inline std::optional<double> value_at_zero(const Kernel& k) {
    using namespace kernels;
    if (k.logarithmic() || k.sing_exponent() > 0.0) return std::nullopt;
    return std::visit(
        [](const auto& f) -> std::optional<double> {
            using K = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<K, PowerLaw>) {
                return f.alpha == 0.0 ? 1.0 : 0.0;
            } else if constexpr (std::is_same_v<K, MLKernel>) {
                return f.beta == 1.0 ? 1.0 : 0.0;
            } else if constexpr (std::is_same_v<K, MLAssociate>) {
                return 1.0;  // beta == 0
            } else if constexpr (std::is_same_v<K, ShiftedAssociate>) {
                return f.alpha == 1.0 ? 1.0 : 0.0;
            } else if constexpr (std::is_same_v<K, Series>) {
                return f.series.lead == 0.0 ? f.series.coeffs.front() : 0.0;
            } else {
                return std::nullopt;
            }
        },
        k.form());
}

/// Local expansion at 0 truncated after `order` + 1 coefficients.
inline FracSeries to_frac_series(const Kernel& k, int order) {
    if (order < 0) throw DomainError("to_frac_series: order must be non-negative");
    using namespace kernels;
    return std::visit(
        [order](const auto& f) -> FracSeries {
            using K = std::decay_t<decltype(f)>;
            FracSeries s;
            if constexpr (std::is_same_v<K, PowerLaw>) {
                s = {-f.alpha, 1.0, {specfun::rgamma(1.0 - f.alpha)}};
            } else if constexpr (std::is_same_v<K, MLKernel>) {
                s.lead = f.beta - 1.0;
                s.step = f.alpha;
                for (int m = 0; m <= order; ++m)
                    s.coeffs.push_back((m % 2 ? -1.0 : 1.0) * specfun::rgamma(f.alpha * m + f.beta));
            } else if constexpr (std::is_same_v<K, MLAssociate>) {
                s = {-f.beta, f.alpha, {specfun::rgamma(1.0 - f.beta)}};
                if (order >= 1) s.coeffs.push_back(specfun::rgamma(f.alpha - f.beta + 1.0));
            } else if constexpr (std::is_same_v<K, ShiftedAssociate>) {
                s.lead = f.alpha - 1.0;
                s.step = 1.0;
                double c = specfun::rgamma(f.alpha);
                for (int m = 0; m <= order; ++m) {
                    s.coeffs.push_back(c);
                    c *= -f.a / (m + 1);
                }
            } else if constexpr (std::is_same_v<K, ExpDamped>) {
                s.lead = -f.alpha;
                s.step = f.beta;
                double c = 1.0;
                for (int m = 0; m <= order; ++m) {
                    s.coeffs.push_back(c);
                    c *= -1.0 / (m + 1);
                }
            } else if constexpr (std::is_same_v<K, Series>) {
                s = f.series;
                if (static_cast<int>(s.coeffs.size()) > order + 1) s.coeffs.resize(order + 1);
            } else {
                throw UnsupportedKernelError("to_frac_series: kernel has no fractional power series at 0");
            }
            return s;
        },
        k.form());
}

struct SoninePair {
    Kernel g;
    Kernel f;
    std::string label;
};

using ParamMap = std::map<std::string, double>;

namespace detail {

inline double param(const ParamMap& p, const std::string& pair, const std::string& key) {
    const auto it = p.find(key);
    if (it == p.end()) throw DomainError(pair + ": missing parameter '" + key + "'");
    return it->second;
}

inline void only_params(const ParamMap& p, const std::string& pair, std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : p) {
        bool known = false;
        for (const char* key : keys) known = known || k == key;
        if (!known) throw DomainError(pair + ": unexpected parameter '" + k + "'");
    }
}

}  // namespace detail

/// Catalog pairs: powerlaw, ml, dist-order, shifted, counterexample.
inline SoninePair catalog_pair(const std::string& name, const ParamMap& params = {}) {
    using namespace kernels;
    using detail::param;
    using detail::require;
    if (name == "powerlaw") {
        detail::only_params(params, name, {"alpha"});
        const double a = param(params, name, "alpha");
        require(a > 0.0 && a < 1.0, "powerlaw pair: alpha must lie in (0, 1)");
        return {Kernel(PowerLaw{a}), Kernel(PowerLaw{1.0 - a}), name};
    }
    if (name == "ml") {
        detail::only_params(params, name, {"alpha", "beta"});
        const double a = param(params, name, "alpha");
        const double b = param(params, name, "beta");
        require(a > 0.0 && a <= b && b < 1.0, "ml pair: need 0 < alpha <= beta < 1");
        return {Kernel(MLKernel{a, b}), Kernel(MLAssociate{a, b}), name};
    }
    if (name == "dist-order") {
        detail::only_params(params, name, {});
        return {Kernel(DistributedOrderW{}), Kernel(DistributedOrderV{}), name};
    }
    if (name == "shifted") {
        detail::only_params(params, name, {"alpha", "a"});
        const double a = param(params, name, "alpha");
        const double s = param(params, name, "a");
        require(a > 0.0 && a < 1.0, "shifted pair: alpha must lie in (0, 1)");
        require(s > 0.0, "shifted pair: a must be positive");
        return {Kernel(Shifted{a, s}), Kernel(ShiftedAssociate{a, s}), name};
    }
    if (name == "counterexample") {
        detail::only_params(params, name, {});
        return {Kernel(CosCounterexample{}), Kernel(CoshCounterexample{}), name};
    }
    throw UnknownNameError("catalog_pair: unknown pair '" + name + "'");
}

}  // namespace sonine
