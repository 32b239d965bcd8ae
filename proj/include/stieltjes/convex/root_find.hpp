#pragma once

// Inversion of increasing functions: doubling/halving bracket search followed
// by a safeguarded secant/bisection hybrid.

#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "stieltjes/errors.hpp"

namespace stieltjes::convex {

using Evaluator = std::function<double(double)>;

struct InvertOptions {
    double domain_lower = -std::numeric_limits<double>::infinity();
    double start = 1.0;   // initial probe (clamped above domain_lower)
    int bracket_budget = 400;
    int refine_budget = 300;
};

// Solve f(x) = y for increasing f; |f(x) - y| <= tol * max(1, |y|).
// Throws RangeError when the doubling search exhausts its budget without
// bracketing y (e.g. y below the infimum of f on its half-line).
inline double invert_monotone(const Evaluator& f, double y, double tol,
                              InvertOptions opt = {}) {
    const double inf = std::numeric_limits<double>::infinity();
    const double a = opt.domain_lower;
    double x0 = opt.start;
    if (std::isfinite(a) && x0 <= a) x0 = a + 1.0;

    auto safe_f = [&f](double x) { return f(x); };

    double lo = x0, hi = x0;
    double flo = safe_f(lo), fhi = flo;

    int steps = 0;
    // expand upward until f(hi) >= y
    double gap = 1.0;
    while (!(fhi >= y) && steps < opt.bracket_budget) {
        hi += gap;
        gap *= 2.0;
        fhi = safe_f(hi);
        if (!std::isfinite(fhi)) { // beyond overflow: treat as +inf, bracket found
            fhi = inf;
            break;
        }
        ++steps;
    }
    if (!(fhi >= y))
        throw RangeError("invert_monotone: target " + std::to_string(y) +
                             " not reached below x=" + std::to_string(hi),
                         RangeSide::Above);
    // contract downward until f(lo) <= y
    double shrink = 1.0;
    while (!(flo <= y) && steps < opt.bracket_budget) {
        if (std::isfinite(a)) {
            lo = a + (lo - a) / 2.0;
            if (!(lo > a)) break;
        } else {
            lo -= shrink;
            shrink *= 2.0;
        }
        flo = safe_f(lo);
        if (!std::isfinite(flo)) break;
        ++steps;
    }
    if (!(flo <= y))
        throw RangeError("invert_monotone: target " + std::to_string(y) +
                             " below the attainable range (inf ~ " + std::to_string(flo) + ")",
                         RangeSide::Below);

    // secant step when it lands inside the bracket and keeps shrinking it;
    // forced bisection otherwise (secant alone creeps on exponential flats)
    double x = 0.5 * (lo + hi);
    bool force_bisect = false;
    for (int it = 0; it < opt.refine_budget; ++it) {
        const double width = hi - lo;
        double cand = 0.5 * (lo + hi);
        if (!force_bisect && std::isfinite(flo) && std::isfinite(fhi) && fhi > flo) {
            const double sec = lo + (y - flo) * width / (fhi - flo);
            if (sec > lo + 0.01 * width && sec < hi - 0.01 * width) cand = sec;
        }
        x = cand;
        const double fx = safe_f(x);
        if (std::abs(fx - y) <= tol * std::max(1.0, std::abs(y))) return x;
        if (fx < y) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
        // a step that barely shrank the bracket earns a bisection next round
        force_bisect = (hi - lo) > 0.6 * width;
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() *
                           (std::abs(lo) + std::abs(hi) + 1e-300))
            return 0.5 * (lo + hi);
    }
    return x;
}

} // namespace stieltjes::convex
