#pragma once

// ConvexProfile: a SmoothFunction G together with a certified doubling grid on
// which G'' > 0, and the scale function s_G(u) = (G''(u))^{-1/2}.

#include <cmath>
#include <string>
#include <vector>

#include "stieltjes/config.hpp"
#include "stieltjes/convex/smooth_function.hpp"
#include "stieltjes/errors.hpp"

namespace stieltjes::convex {

class ConvexProfile {
public:
    ConvexProfile(SmoothFunction g, std::vector<double> grid)
        : g_(std::move(g)), grid_(std::move(grid)) {
        certify();
    }

    const SmoothFunction& fn() const { return g_; }
    const std::vector<double>& grid() const { return grid_; }

    double value(double u) const { return g_(u); }
    double d1(double u) const { return g_.d1(u); }
    double d2(double u) const { return g_.d2(u); }
    double scale(double u) const { return 1.0 / std::sqrt(g_.d2(u)); } // s_G
    double lower() const { return g_.lower(); }

private:
    void certify() {
        if (grid_.size() < 4)
            throw CertificationError("convexity grid too short");
        double prev_d1 = -std::numeric_limits<double>::infinity();
        for (double u : grid_) {
            const double dd = g_.d2(u);
            if (!(dd > 0.0) || !std::isfinite(dd))
                throw CertificationError("G'' not strictly positive at u=" + std::to_string(u));
            const double d1v = g_.d1(u);
            if (!std::isfinite(d1v) || d1v <= prev_d1)
                throw CertificationError("G' not increasing at u=" + std::to_string(u));
            prev_d1 = d1v;
            if (!std::isfinite(g_(u)))
                throw CertificationError("G not finite at u=" + std::to_string(u));
        }
    }

    SmoothFunction g_;
    std::vector<double> grid_;
};

// Doubling grid 2^k_lo .. 2^k_hi clipped to the function's half-line and
// truncated at the first point where G, G' or G'' stops being finite
// (overflow guard).
inline std::vector<double> doubling_grid(const SmoothFunction& g,
                                         const ToolConfig& cfg = default_config()) {
    std::vector<double> grid;
    int k = cfg.grid_k_lo;
    while (std::pow(2.0, k) <= g.lower() + 1.0 && k < cfg.grid_k_hi) ++k;
    for (; k <= cfg.grid_k_hi; ++k) {
        const double u = std::pow(2.0, k);
        const double v = g(u), d1 = g.d1(u), d2 = g.d2(u);
        if (!std::isfinite(v) || !std::isfinite(d1) || !std::isfinite(d2)) break;
        grid.push_back(u);
    }
    return grid;
}

inline ConvexProfile make_profile(const SmoothFunction& g,
                                  const ToolConfig& cfg = default_config()) {
    return ConvexProfile(g, doubling_grid(g, cfg));
}

inline ConvexProfile make_profile(const exprdsl::ExprPtr& e,
                                  const ToolConfig& cfg = default_config()) {
    return make_profile(SmoothFunction::from_expression(e), cfg);
}

// d_c G (x) = G(cx)
inline ConvexProfile dilate(const ConvexProfile& p, double c,
                            const ToolConfig& cfg = default_config()) {
    if (!(c > 0)) throw InputError("dilate: c must be positive");
    const SmoothFunction& g = p.fn();
    SmoothFunction out = [&] {
        if (g.sym()) {
            auto scaled_var = exprdsl::make_node(exprdsl::NodeKind::Mul, exprdsl::make_const(c),
                                                 exprdsl::make_var());
            return SmoothFunction::from_expression(exprdsl::substitute(*g.sym(), scaled_var));
        }
        auto f = g.value_fn();
        auto d1 = g.d1_fn();
        auto d2 = g.d2_fn();
        return SmoothFunction::from_callbacks(
            [f, c](double x) { return f(c * x); }, [d1, c](double x) { return c * d1(c * x); },
            [d2, c](double x) { return c * c * d2(c * x); }, g.lower() / c);
    }();
    return make_profile(out, cfg);
}

// c * G
inline ConvexProfile scale(const ConvexProfile& p, double c,
                           const ToolConfig& cfg = default_config()) {
    if (!(c > 0)) throw InputError("scale: c must be positive");
    const SmoothFunction& g = p.fn();
    SmoothFunction out = [&] {
        if (g.sym()) {
            return SmoothFunction::from_expression(
                exprdsl::make_node(exprdsl::NodeKind::Mul, exprdsl::make_const(c), *g.sym()));
        }
        auto f = g.value_fn();
        auto d1 = g.d1_fn();
        auto d2 = g.d2_fn();
        return SmoothFunction::from_callbacks([f, c](double x) { return c * f(x); },
                                              [d1, c](double x) { return c * d1(x); },
                                              [d2, c](double x) { return c * d2(x); }, g.lower());
    }();
    return make_profile(out, cfg);
}

} // namespace stieltjes::convex
