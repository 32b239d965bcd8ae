#pragma once

// Membership tests for the function classes driving the determinacy criteria:
//
//   self-neglecting s:   s(u + w s(u)) / s(u) -> 1   locally uniformly in w
//   asymptotically parabolic G:   s_G = (G'')^{-1/2} self-neglecting
//   admissible G_*:   asymptotically parabolic with G_*(x)/x -> infinity
//   flat b w.r.t. G:  b(u + w s_G(u)) / b(u) -> 1
//
// These are finite-horizon checks, not proofs: a limit is accepted when the
// deviation profile decays monotonically below tol across the last three
// doubling steps, and the tested horizon is always reported.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "stieltjes/config.hpp"
#include "stieltjes/convex/profile.hpp"
#include "stieltjes/oracle/blocks.hpp"

namespace stieltjes::convex {

struct MembershipResult {
    bool pass = false;
    bool inconclusive = false;        // growth stalled / horizon too short
    double max_tail_deviation = 0.0;  // last deviation evaluated
    std::vector<double> u_grid;
    std::vector<double> deviations;   // per grid point: max over the w-net
    std::string note;
};

namespace detail {

inline std::vector<double> w_net(const ToolConfig& cfg) {
    std::vector<double> w;
    for (int i = 0; i < cfg.w_points; ++i)
        w.push_back(cfg.w_lo + (cfg.w_hi - cfg.w_lo) * i / (cfg.w_points - 1));
    return w;
}

} // namespace detail

// ratio(u, w) -> |num(u + w*step(u)) / num(u) - 1| driven deviation profile
inline MembershipResult limit_ratio_check(const std::function<double(double)>& num,
                                          const std::function<double(double)>& step,
                                          const std::vector<double>& u_grid, double lower,
                                          const ToolConfig& cfg) {
    MembershipResult out;
    const std::vector<double> ws = detail::w_net(cfg);
    for (double u : u_grid) {
        const double base = num(u);
        const double st = step(u);
        if (!std::isfinite(base) || !std::isfinite(st) || base <= 0 || st <= 0) continue;
        double dev = 0.0;
        bool usable = true;
        for (double w : ws) {
            const double shifted = u + w * st;
            if (shifted <= lower) {
                usable = false; // w-net escapes the domain at this u
                break;
            }
            const double v = num(shifted);
            if (!std::isfinite(v) || v <= 0) {
                usable = false;
                break;
            }
            dev = std::max(dev, std::abs(v / base - 1.0));
        }
        if (!usable) continue;
        out.u_grid.push_back(u);
        out.deviations.push_back(dev);
    }
    if (out.deviations.size() < 4) {
        out.inconclusive = true;
        out.note = "fewer than four usable grid points";
        return out;
    }
    const std::size_t n = out.deviations.size();
    const double d1 = out.deviations[n - 3], d2 = out.deviations[n - 2],
                 d3 = out.deviations[n - 1];
    out.max_tail_deviation = d3;
    const double slack = 1e-15;
    const bool monotone = d1 + slack >= d2 && d2 + slack >= d3;
    const bool below = d1 <= cfg.limit_tol && d2 <= cfg.limit_tol && d3 <= cfg.limit_tol;
    out.pass = monotone && below;
    if (!out.pass) {
        out.note = monotone ? "deviations decay but remain above tol"
                            : "deviation profile not monotone on the tail";
    }
    return out;
}

inline std::vector<double> default_membership_grid(double lower, const ToolConfig& cfg) {
    std::vector<double> grid;
    int k = cfg.grid_k_lo;
    while (std::pow(2.0, k) <= lower + 1.0 && k < cfg.grid_k_hi) ++k;
    for (; k <= cfg.grid_k_hi; ++k) grid.push_back(std::pow(2.0, k));
    return grid;
}

// s positive, tested on u_grid with the w-net of cfg.
inline MembershipResult check_self_neglecting(const std::function<double(double)>& s,
                                              const std::vector<double>& u_grid,
                                              double lower = 0.0,
                                              const ToolConfig& cfg = default_config()) {
    return limit_ratio_check(s, s, u_grid, lower, cfg);
}

inline MembershipResult check_self_neglecting(const std::function<double(double)>& s,
                                              double lower = 0.0,
                                              const ToolConfig& cfg = default_config()) {
    return check_self_neglecting(s, default_membership_grid(lower, cfg), lower, cfg);
}

// G in the asymptotically parabolic class: scale function s_G self-neglecting.
inline MembershipResult check_asymptotically_parabolic(const ConvexProfile& g,
                                                       const ToolConfig& cfg = default_config()) {
    auto s = [&g](double u) {
        const double dd = g.d2(u);
        return (dd > 0 && std::isfinite(dd)) ? 1.0 / std::sqrt(dd)
                                             : std::numeric_limits<double>::quiet_NaN();
    };
    return limit_ratio_check(s, s, g.grid(), g.lower(), cfg);
}

// b flat with respect to G: steps taken at scale s_G.
inline MembershipResult check_flat(const std::function<double(double)>& b,
                                   const ConvexProfile& g,
                                   const ToolConfig& cfg = default_config()) {
    auto s = [&g](double u) {
        const double dd = g.d2(u);
        return (dd > 0 && std::isfinite(dd)) ? 1.0 / std::sqrt(dd)
                                             : std::numeric_limits<double>::quiet_NaN();
    };
    return limit_ratio_check(b, s, g.grid(), g.lower(), cfg);
}

// Admissibility: G_*(x)/x increasing without bound along the doubling grid.
// Monotone growth with divergent increments passes; monotone-but-stalling
// growth is Inconclusive; any decrease on the tail fails.
inline MembershipResult check_admissible(const ConvexProfile& gstar,
                                         const ToolConfig& cfg = default_config()) {
    MembershipResult out;
    std::vector<double> ratios;
    for (double x : gstar.grid()) {
        const double v = gstar.value(x) / x;
        if (!std::isfinite(v)) break;
        out.u_grid.push_back(x);
        ratios.push_back(v);
    }
    const std::size_t n = ratios.size();
    if (n < 5) {
        out.inconclusive = true;
        out.note = "grid too short for the growth test";
        return out;
    }
    out.deviations = ratios;
    out.max_tail_deviation = ratios.back();
    for (std::size_t i = n - 3; i < n; ++i) {
        if (!(ratios[i] > ratios[i - 1])) {
            out.note = "G_*(x)/x not increasing on the tail";
            return out; // fail
        }
    }
    // unbounded growth <=> the increment series diverges
    std::vector<double> inc;
    for (std::size_t i = 1; i < n; ++i) inc.push_back(ratios[i] - ratios[i - 1]);
    if (ratios.back() > 1e12) {
        out.pass = true;
        return out;
    }
    // quick divergence signals: non-decreasing increments
    bool nondecreasing = true;
    for (std::size_t i = inc.size() - std::min<std::size_t>(4, inc.size() - 1); i < inc.size(); ++i)
        if (!(inc[i] >= inc[i - 1] * (1.0 - 1e-9))) nondecreasing = false;
    if (nondecreasing) {
        out.pass = true;
        return out;
    }
    // decaying increments: summable <=> growth stalls (Inconclusive)
    std::vector<double> ks, logs;
    for (std::size_t i = inc.size() >= 6 ? inc.size() - 6 : 0; i < inc.size(); ++i) {
        if (inc[i] <= 0) break;
        ks.push_back(std::log(static_cast<double>(i + 1)));
        logs.push_back(std::log(inc[i]));
    }
    if (ks.size() >= 4) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < ks.size(); ++i) {
            sx += ks[i];
            sy += logs[i];
            sxx += ks[i] * ks[i];
            sxy += ks[i] * logs[i];
        }
        const double m =
            (ks.size() * sxy - sx * sy) / (ks.size() * sxx - sx * sx);
        if (m >= -1.05) { // increments at least ~1/k: divergent growth
            out.pass = true;
            return out;
        }
    }
    out.inconclusive = true;
    out.note = "growth has not decreased but stalls within the tested horizon";
    return out;
}

} // namespace stieltjes::convex
