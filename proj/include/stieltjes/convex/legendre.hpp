#pragma once

// Legendre transform on convex profiles:
//   G_*(x) = x u* - G(u*) at u* = (G')^{-1}(x),
// with conjugate derivatives G_*' = (G')^{-1} and G_*''(x) = 1/G''(G_*'(x)).

#include <vector>

#include "stieltjes/convex/profile.hpp"
#include "stieltjes/convex/root_find.hpp"

namespace stieltjes::convex {

inline double invert_derivative(const ConvexProfile& g, double y, double tol) {
    InvertOptions opt;
    opt.domain_lower = g.lower();
    opt.start = g.grid().empty() ? 1.0 : g.grid().front();
    auto d1 = [&g](double u) { return g.d1(u); };
    return invert_monotone(d1, y, tol, opt);
}

inline double legendre(const ConvexProfile& g, double x, double tol = 1e-12) {
    const double u = invert_derivative(g, x, tol);
    return x * u - g.value(u);
}

// Conjugate profile on the supplied grid (grid points must lie in the range
// of G').  Derivatives come from the conjugacy identities, so the conjugate
// is exact up to the root-finding tolerance.
inline ConvexProfile legendre_profile(const ConvexProfile& g, std::vector<double> grid,
                                      double tol = 1e-12) {
    auto shared = std::make_shared<ConvexProfile>(g);
    auto val = [shared, tol](double x) {
        const double u = invert_derivative(*shared, x, tol);
        return x * u - shared->value(u);
    };
    auto d1 = [shared, tol](double x) { return invert_derivative(*shared, x, tol); };
    auto d2 = [shared, tol](double x) {
        const double u = invert_derivative(*shared, x, tol);
        return 1.0 / shared->d2(u);
    };
    // domain of G_* is the range of G'; probe G' toward the lower edge of
    // G's half-line for a conservative bound
    double lower = std::numeric_limits<double>::infinity();
    const double a = g.lower();
    if (std::isfinite(a)) {
        for (double eps : {1e-2, 1e-4, 1e-6, 1e-8}) {
            const double v = g.d1(a + eps * (1.0 + std::abs(a)));
            if (std::isfinite(v)) lower = std::min(lower, v);
        }
    } else {
        for (double u : {-1024.0, -1048576.0, -1e18}) {
            const double v = g.d1(u);
            if (std::isfinite(v)) lower = std::min(lower, v);
        }
    }
    if (!std::isfinite(lower)) lower = -std::numeric_limits<double>::infinity();
    SmoothFunction f = SmoothFunction::from_callbacks(val, d1, d2, lower);
    return ConvexProfile(std::move(f), std::move(grid));
}

// Grid for the conjugate: the image of the source grid under G'.
inline std::vector<double> conjugate_grid(const ConvexProfile& g) {
    std::vector<double> out;
    out.reserve(g.grid().size());
    for (double u : g.grid()) {
        const double x = g.d1(u);
        if (std::isfinite(x) && (out.empty() || x > out.back())) out.push_back(x);
    }
    return out;
}

inline ConvexProfile legendre_profile(const ConvexProfile& g, double tol = 1e-12) {
    return legendre_profile(g, conjugate_grid(g), tol);
}

} // namespace stieltjes::convex
