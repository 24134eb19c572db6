#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "sonine/detail/summation.hpp"
#include "sonine/errors.hpp"

namespace sonine {

/// t^lead * sum_n coeffs[n] t^(n*step)
struct FracSeries {
    double lead = 0.0;
    double step = 1.0;
    std::vector<double> coeffs;

    int order() const { return static_cast<int>(coeffs.size()) - 1; }
    double coeff(std::size_t n) const { return n < coeffs.size() ? coeffs[n] : 0.0; }

    void validate() const {
        if (!(lead > -1.0)) throw DomainError("FracSeries: lead exponent must exceed -1");
        if (!(step > 0.0)) throw DomainError("FracSeries: step must be positive");
        if (coeffs.empty()) throw DomainError("FracSeries: coefficient list is empty");
        if (coeffs.front() == 0.0) throw DomainError("FracSeries: leading coefficient is zero");
        for (double c : coeffs)
            if (!std::isfinite(c)) throw DomainError("FracSeries: non-finite coefficient");
    }
};

struct SeriesValue {
    double value = 0.0;
    // Set when the last retained term is not negligible (above 1e-14 of the sum),
    // i.e. the truncation rather than rounding dominates the error.
    bool truncation_dominated = false;
};

inline SeriesValue eval_series_checked(const FracSeries& s, double t) {
    if (!(t > 0.0)) throw DomainError("eval_series: t must be positive");
    detail::CompensatedSum sum;
    double last = 0.0;
    for (std::size_t n = 0; n < s.coeffs.size(); ++n) {
        last = s.coeffs[n] * std::pow(t, static_cast<double>(n) * s.step);
        sum += last;
    }
    const double body = sum.value();
    SeriesValue out;
    out.value = std::pow(t, s.lead) * body;
    out.truncation_dominated = s.coeffs.size() > 1 && std::abs(last) > 1e-14 * std::abs(body);
    return out;
}

inline double eval_series(const FracSeries& s, double t) { return eval_series_checked(s, t).value; }

}  // namespace sonine
