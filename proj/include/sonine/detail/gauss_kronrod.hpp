#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "sonine/detail/summation.hpp"

namespace sonine::detail {

struct AdaptiveResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = false;
};

namespace gk15 {
// QUADPACK qk15 abscissae and weights.
inline constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
}  // namespace gk15

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

template <class F>
Segment gk15_segment(F& f, double a, double b) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(centre);
    double kronrod = fc * gk15::wgk[7];
    double gauss = fc * gk15::wg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * gk15::xgk[j];
        const double fsum = f(centre - dx) + f(centre + dx);
        kronrod += gk15::wgk[j] * fsum;
        if (j % 2 == 1) gauss += gk15::wg[j / 2] * fsum;
    }
    return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

/// Globally adaptive 15-point Gauss-Kronrod over [a, b] with bisection of the worst segment.
template <class F>
AdaptiveResult adaptive_gk15(F&& f, double a, double b, double rel_tol, double abs_tol = 0.0,
                             int max_segments = 2000) {
    std::priority_queue<Segment> heap;
    Segment first = gk15_segment(f, a, b);
    heap.push(first);
    double total = first.value;
    double err = first.error;
    int segments = 1;
    while (err > std::max(abs_tol, rel_tol * std::abs(total)) && segments < max_segments) {
        Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            heap.push(worst);
            break;
        }
        Segment left = gk15_segment(f, worst.a, mid);
        Segment right = gk15_segment(f, mid, worst.b);
        heap.push(left);
        heap.push(right);
        ++segments;
        total += (left.value + right.value) - worst.value;
        err += (left.error + right.error) - worst.error;
    }
    {
        // final re-sum; the running totals pick up cancellation noise
        CompensatedSum v, e;
        while (!heap.empty()) {
            v += heap.top().value;
            e += heap.top().error;
            heap.pop();
        }
        total = v.value();
        err = e.value();
    }
    return {total, err, err <= std::max(abs_tol, rel_tol * std::abs(total))};
}

}  // namespace sonine::detail
