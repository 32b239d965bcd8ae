#pragma once

// Leading-order classification of eventually-positive exp-log functions on a
// half-line, in the scale  x^p (log x)^q (log log x)^r  topped by exponential
// tower levels.  The classifier evaluates log f on a doubling ladder of large
// arguments (where lower-order corrections sit below double precision) and
// fits log f in the {log u, log log u, 1} basis by least squares.  A fitted
// exponent is accepted only when the tail-6 and tail-5 fits agree and the
// residual is negligible; anything else is reported Unknown and handed to the
// numeric extrapolation oracle by callers.

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stieltjes/config.hpp"
#include "stieltjes/exprdsl/expr.hpp"

namespace stieltjes::exprdsl {

// log-scale evaluator: u -> log f(u); NaN marks "unavailable at this point"
using LogEvaluator = std::function<double(double)>;

struct AsymptoticTerm {
    double x_pow = 0.0;
    double log_pow = 0.0;
    double coeff = 1.0;
    bool coeff_known = false;
};

// level 0: f ~ c x^p (log x)^q; level k>=1: f = exp(E) with E of level k-1.
// chain[0] describes f itself; chain[i] the i-th exponent up the tower.
struct AsymptoticOrder {
    bool classified = false;
    int level = 0;
    int direction = 0; // for level>=1: sign of the exponent's limit
    std::vector<AsymptoticTerm> chain;
    double third_exponent = 0.0; // (log log x)^r refinement at the p=q=-1 boundary
    bool third_known = false;
    double fit_residual = 0.0;
    std::string note;
};

enum class AsymptoticRelation { MuchSmaller, Comparable, MuchGreater, Unknown };

inline const char* to_cstr(AsymptoticRelation r) {
    switch (r) {
    case AsymptoticRelation::MuchSmaller: return "f<<g";
    case AsymptoticRelation::Comparable: return "f~g";
    case AsymptoticRelation::MuchGreater: return "f>>g";
    default: return "unknown";
    }
}

namespace detail {

// least squares for y ~ c0*logu + c1*loglogu + c2; returns max |residual|
struct ScaleFit {
    double p = 0, q = 0, c = 0;
    double resid = 1e300;
};

inline ScaleFit fit_scale(const std::vector<double>& logu, const std::vector<double>& L,
                          std::size_t from) {
    const std::size_t n = L.size() - from;
    ScaleFit out;
    if (n < 4) return out;
    // normal equations for the 3-column design [logu, log(logu), 1]
    double a[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    double b[3] = {0, 0, 0};
    for (std::size_t i = from; i < L.size(); ++i) {
        const double col[3] = {logu[i], std::log(logu[i]), 1.0};
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) a[r][c] += col[r] * col[c];
            b[r] += col[r] * L[i];
        }
    }
    // Gaussian elimination with partial pivoting
    int idx[3] = {0, 1, 2};
    for (int k = 0; k < 3; ++k) {
        int piv = k;
        for (int r = k + 1; r < 3; ++r)
            if (std::abs(a[idx[r]][k]) > std::abs(a[idx[piv]][k])) piv = r;
        std::swap(idx[k], idx[piv]);
        const double d = a[idx[k]][k];
        if (d == 0) return out;
        for (int r = k + 1; r < 3; ++r) {
            const double m = a[idx[r]][k] / d;
            for (int c = k; c < 3; ++c) a[idx[r]][c] -= m * a[idx[k]][c];
            b[idx[r]] -= m * b[idx[k]];
        }
    }
    double x[3];
    for (int k = 2; k >= 0; --k) {
        double s = b[idx[k]];
        for (int c = k + 1; c < 3; ++c) s -= a[idx[k]][c] * x[c];
        x[k] = s / a[idx[k]][k];
    }
    out.p = x[0];
    out.q = x[1];
    out.c = x[2];
    out.resid = 0;
    for (std::size_t i = from; i < L.size(); ++i) {
        const double pred = x[0] * logu[i] + x[1] * std::log(logu[i]) + x[2];
        out.resid = std::max(out.resid, std::abs(L[i] - pred));
    }
    return out;
}

inline bool exp_scale(const std::vector<double>& slopes) {
    if (slopes.size() < 4) return false;
    const std::size_t n = slopes.size();
    // magnitudes growing steadily with a consistent sign
    for (std::size_t i = n - 3; i < n; ++i) {
        if (std::abs(slopes[i]) < 1.08 * std::abs(slopes[i - 1])) return false;
        if (slopes[i] * slopes[i - 1] <= 0) return false;
    }
    return std::abs(slopes.back()) > 10.0;
}

} // namespace detail

// Classify from a log-scale evaluator.  `lower` restricts the ladder to the
// function's half-line of definition.
inline AsymptoticOrder classify_asymptotic(const LogEvaluator& logf, double lower = 0.0,
                                           const ToolConfig& cfg = default_config()) {
    AsymptoticOrder out;

    int k_lo = cfg.ladder_k_lo;
    while (std::pow(2.0, k_lo) <= lower + 1.0 && k_lo < cfg.ladder_k_hi) ++k_lo;
    std::vector<double> L, logu, u;
    for (int k = k_lo; k <= cfg.ladder_k_hi; k += cfg.ladder_step) {
        const double x = std::pow(2.0, k);
        const double v = logf(x);
        if (!std::isfinite(v)) break; // keep the finite prefix only
        u.push_back(x);
        L.push_back(v);
        logu.push_back(std::log(x));
    }
    if (L.size() < 5) {
        out.note = "ladder too short (overflow or narrow domain)";
        return out;
    }

    std::vector<double> slopes;
    for (std::size_t i = 1; i < L.size(); ++i)
        slopes.push_back((L[i] - L[i - 1]) / (logu[i] - logu[i - 1]));

    if (detail::exp_scale(slopes)) {
        out.classified = true;
        out.level = 1;
        out.direction = (slopes.back() > 0) ? 1 : -1;
        out.chain.push_back(AsymptoticTerm{});
        // classify |L| itself to report the tower height
        std::vector<double> absL;
        absL.reserve(L.size());
        for (double v : L) absL.push_back(std::abs(v));
        auto sub_logf = [&u, &absL](double x) {
            for (std::size_t i = 0; i < u.size(); ++i)
                if (u[i] == x)
                    return absL[i] > 0 ? std::log(absL[i])
                                       : -std::numeric_limits<double>::infinity();
            return std::numeric_limits<double>::quiet_NaN();
        };
        AsymptoticOrder sub = classify_asymptotic(sub_logf, lower, cfg);
        if (sub.classified) {
            out.level = sub.level + 1;
            for (const auto& term : sub.chain) out.chain.push_back(term);
        }
        return out;
    }

    // power-log scale: compare the tail-6 fit against the tail-5 fit
    const std::size_t n = L.size();
    detail::ScaleFit f6 = detail::fit_scale(logu, L, n >= 6 ? n - 6 : 0);
    detail::ScaleFit f5 = detail::fit_scale(logu, L, n - 5);
    out.fit_residual = std::max(f6.resid, f5.resid);
    const bool agree = std::abs(f6.p - f5.p) <= 1e-6 * (1.0 + std::abs(f6.p)) &&
                       std::abs(f6.q - f5.q) <= 1e-4 * (1.0 + std::abs(f6.q));
    if (!agree || out.fit_residual > 1e-6) {
        out.note = "power-log fit did not stabilize";
        return out;
    }

    out.classified = true;
    out.level = 0;
    AsymptoticTerm t;
    t.x_pow = f5.p;
    t.log_pow = f5.q;

    // third scale: N(u) = L - p logu - q loglogu against logloglog u
    std::vector<double> N, lllu;
    for (std::size_t i = n - 5; i < n; ++i) {
        N.push_back(L[i] - f5.p * logu[i] - f5.q * std::log(logu[i]));
        lllu.push_back(std::log(std::log(logu[i])));
    }
    std::vector<double> rslopes;
    for (std::size_t i = 1; i < N.size(); ++i)
        rslopes.push_back((N[i] - N[i - 1]) / (lllu[i] - lllu[i - 1]));
    const double spread = std::max({std::abs(rslopes[0] - rslopes[1]),
                                    std::abs(rslopes[1] - rslopes[2]),
                                    std::abs(rslopes[2] - rslopes[3])});
    if (spread <= 1e-4 * (1.0 + std::abs(rslopes.back()))) {
        out.third_exponent = rslopes.back();
        out.third_known = true;
        if (std::abs(out.third_exponent) <= 1e-5) {
            t.coeff = std::exp(N.back());
            t.coeff_known = true;
        }
    }
    out.chain.push_back(t);
    return out;
}

// Classify an expression; requires eventual positivity on the ladder.
inline AsymptoticOrder classify_asymptotic(const ExprPtr& e, double lower = 0.0,
                                           const ToolConfig& cfg = default_config()) {
    bool sign_ok = true;
    auto logf = [&e, &sign_ok](double x) {
        SignedLog v = log_eval(e, x);
        if (v.poisoned) return std::numeric_limits<double>::quiet_NaN();
        if (v.sign < 0) sign_ok = false;
        if (v.sign <= 0) return std::numeric_limits<double>::quiet_NaN();
        return v.loga;
    };
    AsymptoticOrder out = classify_asymptotic(logf, lower, cfg);
    if (!sign_ok) {
        out.classified = false;
        out.note = "not eventually positive on the ladder";
    }
    return out;
}

namespace detail {

inline AsymptoticRelation relation_from_order(const AsymptoticOrder& h, double snap) {
    if (!h.classified) return AsymptoticRelation::Unknown;
    if (h.level >= 1)
        return h.direction > 0 ? AsymptoticRelation::MuchGreater
                               : AsymptoticRelation::MuchSmaller;
    const AsymptoticTerm& t = h.chain.front();
    if (t.x_pow > snap) return AsymptoticRelation::MuchGreater;
    if (t.x_pow < -snap) return AsymptoticRelation::MuchSmaller;
    if (t.log_pow > snap) return AsymptoticRelation::MuchGreater;
    if (t.log_pow < -snap) return AsymptoticRelation::MuchSmaller;
    if (h.third_known) {
        if (h.third_exponent > snap) return AsymptoticRelation::MuchGreater;
        if (h.third_exponent < -snap) return AsymptoticRelation::MuchSmaller;
        if (t.coeff_known) return AsymptoticRelation::Comparable;
    }
    return AsymptoticRelation::Unknown;
}

} // namespace detail

// Ordering of f against g, consistent with lim f/g when that limit exists.
// Classifies the ratio f/g directly, which makes the answer exactly
// antisymmetric under swapping the arguments.
inline AsymptoticRelation compare_asymptotic(const ExprPtr& f, const ExprPtr& g,
                                             const ToolConfig& cfg = default_config()) {
    double lower = 1.0;
    try {
        lower = std::max({1.0, domain_lower_bound(f), domain_lower_bound(g)});
    } catch (const DomainError&) {
        return AsymptoticRelation::Unknown;
    }
    ExprPtr ratio = make_node(NodeKind::Div, f, g);
    AsymptoticOrder h = classify_asymptotic(ratio, lower, cfg);
    return detail::relation_from_order(h, cfg.snap_tol);
}

// Evaluator flavor for functions without a closed form (log-scale inputs).
inline AsymptoticRelation compare_asymptotic(const LogEvaluator& logf, const LogEvaluator& logg,
                                             double lower = 1.0,
                                             const ToolConfig& cfg = default_config()) {
    auto log_ratio = [&](double x) { return logf(x) - logg(x); };
    AsymptoticOrder h = classify_asymptotic(log_ratio, lower, cfg);
    return detail::relation_from_order(h, cfg.snap_tol);
}

} // namespace stieltjes::exprdsl
