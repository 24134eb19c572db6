#pragma once

/**
 * @file laplace.hpp
 * @brief Laplace-domain checks: forward transform, fixed Talbot inversion and
 *        the decomposition a g + g * phi = 1 for kernels regular at 0.
 *
 * The forward transform works on the real axis only. It substitutes x = p t,
 * handles [0, 1] in x with the same endpoint machinery as the convolutions,
 * and covers [1, inf) with doubling Gauss-Legendre panels. Talbot inversion
 * needs the transform off the real axis, so it runs on the closed-form
 * transforms of the catalog.
 */

#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

#include "sonine/conv.hpp"
#include "sonine/detail/endpoint.hpp"
#include "sonine/detail/summation.hpp"
#include "sonine/errors.hpp"
#include "sonine/kernel.hpp"
#include "sonine/quadrature.hpp"
#include "sonine/specfun.hpp"

namespace sonine {

using cplx = std::complex<double>;

struct TransformGrid {
    std::vector<double> ps;

    void validate() const {
        if (ps.empty()) throw DomainError("TransformGrid: empty");
        for (std::size_t i = 0; i < ps.size(); ++i) {
            if (!(ps[i] > 0.0)) throw DomainError("TransformGrid: p must be positive");
            if (i > 0 && !(ps[i] > ps[i - 1])) throw DomainError("TransformGrid: p must be ascending");
        }
    }
};

namespace detail {

inline constexpr int tail_nodes = 32;
inline constexpr int tail_panels = 11;  // x up to 2^11

// x -> k(x / p), with the head mass rescaled accordingly.
inline Integrand rescaled(const Integrand& k, double p) {
    Integrand out;
    out.fn = [fn = k.fn, p](double x) { return fn(x / p); };
    out.sing = k.sing;
    if (k.sing.head_mass) out.sing.head_mass = [h = k.sing.head_mass, p](double eps) { return p * h(eps / p); };
    return out;
}

// (e^L - 1) / L, accurate near L = 0
inline cplx expm1_over(cplx L) {
    if (std::abs(L) > 1e-2) return (std::exp(L) - 1.0) / L;
    cplx term = 1.0, sum = 1.0;
    for (int k = 2; k < 12; ++k) {
        term *= L / static_cast<double>(k);
        sum += term;
    }
    return sum;
}

}  // namespace detail

/// int_0^inf e^{-pt} k(t) dt for real p > 0.
inline double laplace_transform(const Integrand& k, double p, int rule_size = default_rule_size) {
    if (!(p > 0.0)) throw DomainError("laplace_transform: p must be positive");
    detail::check_rule_size(rule_size);
    const Integrand kx = detail::rescaled(k, p);
    auto decay = [](double x) { return std::exp(-x); };
    detail::CompensatedSum total;
    total += detail::endpoint_integral(kx.fn, kx.sing, decay, 1.0, rule_size);
    const auto& gl = quad::unit_legendre(detail::tail_nodes);
    double lo = 1.0;
    for (int j = 0; j < detail::tail_panels; ++j) {
        const double hi = 2.0 * lo;
        detail::CompensatedSum panel;
        for (int i = 0; i < gl.count(); ++i) {
            const double x = lo + (hi - lo) * gl.nodes[i];
            panel += (hi - lo) * gl.weights[i] * std::exp(-x) * kx.fn(x);
        }
        total += panel.value();
        if (lo >= 64.0 && std::abs(panel.value()) <= 1e-18 * std::abs(total.value())) break;
        lo = hi;
    }
    const double value = total.value() / p;
    if (!std::isfinite(value)) throw ConvergenceError("laplace_transform: non-finite result");
    return value;
}

inline double laplace_transform(const Kernel& k, double p, int rule_size = default_rule_size) {
    return laplace_transform(as_integrand(k), p, rule_size);
}

/// Whether closed_form_transform is available for this kernel.
inline bool has_closed_form_transform(const Kernel& k) { return !k.is<kernels::ExpDamped>(); }

/// Analytic Laplace transform, continued to complex p off the negative real axis.
inline cplx closed_form_transform(const Kernel& k, cplx p) {
    using namespace kernels;
    return std::visit(
        [p](const auto& f) -> cplx {
            using K = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<K, PowerLaw>) {
                return std::pow(p, f.alpha - 1.0);
            } else if constexpr (std::is_same_v<K, MLKernel>) {
                const cplx pa = std::pow(p, f.alpha);
                return std::pow(p, f.alpha - f.beta) / (pa + 1.0);
            } else if constexpr (std::is_same_v<K, MLAssociate>) {
                return std::pow(p, f.beta - 1.0) + std::pow(p, f.beta - f.alpha - 1.0);
            } else if constexpr (std::is_same_v<K, DistributedOrderW>) {
                // (p - 1) / (p ln p)
                const cplx L = std::log(p);
                return detail::expm1_over(L) / p;
            } else if constexpr (std::is_same_v<K, DistributedOrderV>) {
                // ln p / (p - 1)
                return 1.0 / detail::expm1_over(std::log(p));
            } else if constexpr (std::is_same_v<K, Shifted>) {
                return std::pow(p + f.a, f.alpha) / p;
            } else if constexpr (std::is_same_v<K, ShiftedAssociate>) {
                return std::pow(p + f.a, -f.alpha);
            } else if constexpr (std::is_same_v<K, CosCounterexample>) {
                return std::exp(-1.0 / p) / std::sqrt(p);
            } else if constexpr (std::is_same_v<K, CoshCounterexample>) {
                return std::exp(1.0 / p) / std::sqrt(p);
            } else if constexpr (std::is_same_v<K, Series>) {
                cplx sum = 0.0;
                const auto& s = f.series;
                for (std::size_t n = 0; n < s.coeffs.size(); ++n) {
                    const double e = s.lead + static_cast<double>(n) * s.step + 1.0;
                    sum += s.coeffs[n] * specfun::gamma(e) * std::pow(p, -e);
                }
                return sum;
            } else {
                throw UnsupportedKernelError("closed_form_transform: no closed form for this kernel");
            }
        },
        k.form());
}

/**
 * Fixed Talbot inversion: contour s(th) = r th (cot th + i), r = 2M / (5t),
 * trapezoidal in th with M nodes.
 */
template <class F>
double talbot_invert(F&& F_hat, double t, int M = 32) {
    if (!(t > 0.0)) throw DomainError("talbot_invert: t must be positive");
    if (M < 2) throw DomainError("talbot_invert: need at least 2 nodes");
    const double r = 2.0 * M / (5.0 * t);
    detail::CompensatedSum sum;
    sum += 0.5 * std::exp(r * t) * std::real(F_hat(cplx(r, 0.0)));
    for (int k = 1; k < M; ++k) {
        const double th = k * specfun::pi / M;
        const double cot = std::cos(th) / std::sin(th);
        const cplx s(r * th * cot, r * th);
        const double sigma = th + (th * cot - 1.0) * cot;
        sum += std::real(std::exp(t * s) * F_hat(s) * cplx(1.0, sigma));
    }
    const double value = r / M * sum.value();
    if (!std::isfinite(value)) throw ConvergenceError("talbot_invert: contour evaluation failed");
    return value;
}

/// p g~(p) f~(p) - 1 on the grid, with numerically computed transforms.
inline ResidualReport laplace_sonine_residual(const SoninePair& pair, const TransformGrid& grid, double tol,
                                              int rule_size = default_rule_size) {
    grid.validate();
    const Integrand g = as_integrand(pair.g);
    const Integrand f = as_integrand(pair.f);
    ResidualReport r;
    for (double p : grid.ps) {
        const double v = p * laplace_transform(g, p, rule_size) * laplace_transform(f, p, rule_size);
        r.add(p, v, v - 1.0);
    }
    return r.finish(tol);
}

struct NsDecomposition {
    double a = 0.0;
    std::vector<std::pair<double, double>> phi_samples;
    double phi_exponent = 0.0;        // lambda with t^lambda phi(t) bounded at 0
    std::function<double(double)> phi;  // Talbot evaluation of phi at any t > 0
};

namespace detail {

// Richardson extrapolation of k(2^-j), j = 10..20, to t = 0.
inline double richardson_at_zero(const Kernel& k) {
    std::vector<double> row;
    for (int j = 10; j <= 20; ++j) row.push_back(k.eval(std::ldexp(1.0, -j)));
    for (std::size_t m = 1; m < row.size(); ++m) {
        const double f = std::ldexp(1.0, static_cast<int>(m));
        for (std::size_t i = row.size() - 1; i >= m; --i) row[i] = (f * row[i] - row[i - 1]) / (f - 1.0);
    }
    return row.back();
}

}  // namespace detail

/**
 * a = 1 / g(0+), phi~(p) = 1 / (p g~(p)) - a, phi by Talbot inversion.
 * Refuses kernels that are singular at 0: those are Sonine functions and
 * have no such decomposition.
 */
inline NsDecomposition ns_decompose(const Kernel& g, const std::vector<double>& ts, int M = 32) {
    if (g.logarithmic() || g.sing_exponent() > 0.0)
        throw DomainError("ns_decompose: kernel is singular at 0; it has no decomposition a g + g*phi = 1");
    if (!has_closed_form_transform(g))
        throw UnsupportedKernelError("ns_decompose: kernel has no closed-form transform");
    detail::check_ts(ts);

    const auto exact = value_at_zero(g);
    const double g0 = exact ? *exact : detail::richardson_at_zero(g);
    if (!(g0 > 0.0) || !std::isfinite(g0)) throw DomainError("ns_decompose: g(0+) must be positive and finite");

    NsDecomposition out;
    out.a = 1.0 / g0;
    const double a = out.a;
    auto phi_hat = [g, a](cplx p) { return 1.0 / (p * closed_form_transform(g, p)) - a; };

    // phi~(p) ~ C p^{lambda - 1} for large p
    const double lo = std::real(phi_hat(cplx(1e4, 0.0)));
    const double hi = std::real(phi_hat(cplx(1e6, 0.0)));
    if (lo > 0.0 && hi > 0.0) {
        const double slope = std::log(hi / lo) / std::log(100.0);
        out.phi_exponent = std::min(1.0 + slope, 0.999);
    }

    out.phi = [phi_hat, M](double t) { return talbot_invert(phi_hat, t, M); };
    for (double t : ts) out.phi_samples.emplace_back(t, out.phi(t));
    return out;
}

/// a g(t) + (g * phi)(t) - 1 at each t.
inline ResidualReport ns_residual(const Kernel& g, const NsDecomposition& d, const std::vector<double>& ts,
                                  double tol, int rule_size = default_rule_size) {
    detail::check_ts(ts);
    Integrand phi;
    phi.fn = d.phi;
    phi.sing.exponent = d.phi_exponent;
    phi.sing.expansion_known = false;
    const Integrand gi = as_integrand(g);
    ResidualReport r;
    for (double t : ts) {
        const double v = d.a * g.eval(t) + convolve(gi, phi, t, rule_size);
        r.add(t, v, v - 1.0);
    }
    return r.finish(tol);
}

}  // namespace sonine
