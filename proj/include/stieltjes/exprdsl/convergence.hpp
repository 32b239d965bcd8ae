#pragma once

// Convergence of improper integrals and series of eventually-positive
// functions.  Symbolic path: classify the leading asymptotic order, then apply
// the fixed rule ladder (exp beats power beats log):
//
//   exponential scale, exponent -> -inf   => converges
//   exponential scale, exponent -> +inf   => diverges
//   f ~ c x^p (log x)^q (log log x)^r:
//       p < -1 converges, p > -1 diverges, and at p = -1 the log factors
//       tie-break with the same threshold at -1 (Bertrand ladder).
//
// Anything outside the ladder falls back to oracle::block_extrapolate.

#include <functional>
#include <optional>
#include <string>

#include "stieltjes/config.hpp"
#include "stieltjes/exprdsl/asymptotic.hpp"
#include "stieltjes/exprdsl/expr.hpp"
#include "stieltjes/oracle/blocks.hpp"

namespace stieltjes::exprdsl {

using oracle::Convergence;
using oracle::SumMode;
using oracle::VerdictMethod;

struct ConvergenceVerdict {
    Convergence verdict = Convergence::Inconclusive;
    VerdictMethod method = VerdictMethod::Symbolic;
    std::string rule;                 // symbolic rule id, or the block rule
    AsymptoticOrder order;            // fitted leading order when classified
    std::optional<oracle::BlockDiagnostics> blocks;
    bool positivity_checked = false;  // see note below
    double positivity_from = 0.0;
    std::string note;
};

namespace detail {

// The defining conditions are "for u large enough" statements with no
// computable onset, so positivity is sampled on a finite grid and flagged in
// the diagnostics rather than certified.
inline bool sample_positive(const std::function<double(double)>& f, double lower, double upper) {
    for (double x = std::max(lower * 1.0001 + 1.0, lower + 1e-6); x < upper; x = x * 2.0 + 1.0) {
        const double v = f(x);
        if (std::isfinite(v) && v < 0) return false;
    }
    return true;
}

inline std::optional<Convergence> ladder_rule(const AsymptoticOrder& o, double snap,
                                              std::string& rule) {
    if (!o.classified) return std::nullopt;
    if (o.level >= 1) {
        if (o.direction < 0) {
            rule = "exp-decay";
            return Convergence::Converges;
        }
        rule = "exp-growth";
        return Convergence::Diverges;
    }
    const AsymptoticTerm& t = o.chain.front();
    if (t.x_pow < -1.0 - snap) {
        rule = "power p<-1";
        return Convergence::Converges;
    }
    if (t.x_pow > -1.0 + snap) {
        rule = "power p>-1";
        return Convergence::Diverges;
    }
    if (t.log_pow < -1.0 - snap) {
        rule = "log-ladder q<-1";
        return Convergence::Converges;
    }
    if (t.log_pow > -1.0 + snap) {
        rule = "log-ladder q>-1";
        return Convergence::Diverges;
    }
    if (o.third_known) {
        if (o.third_exponent < -1.0 - snap) {
            rule = "loglog-ladder r<-1";
            return Convergence::Converges;
        }
        if (o.third_exponent > -1.0 + snap) {
            rule = "loglog-ladder r>-1";
            return Convergence::Diverges;
        }
    }
    return std::nullopt;
}

} // namespace detail

// Evaluator flavor: f given both in linear scale (for the numeric oracle) and
// log scale (for the classifier).
inline ConvergenceVerdict converges(const std::function<double(double)>& f,
                                    const LogEvaluator& logf, SumMode mode, double lower,
                                    const ToolConfig& cfg = default_config()) {
    ConvergenceVerdict out;
    out.positivity_checked =
        detail::sample_positive(f, lower, std::pow(2.0, cfg.horizon_exp));
    out.positivity_from = lower;
    if (!out.positivity_checked) {
        out.note = "negative samples beyond the lower bound";
        return out;
    }

    out.order = classify_asymptotic(logf, lower, cfg);
    if (auto v = detail::ladder_rule(out.order, cfg.snap_tol, out.rule)) {
        out.verdict = *v;
        out.method = VerdictMethod::Symbolic;
        return out;
    }

    oracle::ExtrapolationVerdict ev = oracle::block_extrapolate(f, lower, mode, cfg);
    out.verdict = ev.verdict;
    out.method = VerdictMethod::NumericExtrapolation;
    out.rule = ev.diag.rule;
    out.blocks = std::move(ev.diag);
    return out;
}

// Expression flavor.
inline ConvergenceVerdict converges(const ExprPtr& e, SumMode mode, double lower,
                                    const ToolConfig& cfg = default_config()) {
    auto f = [e](double x) { return eval(e, x); };
    auto logf = [e](double u) {
        SignedLog v = log_eval(e, u);
        if (v.poisoned || v.sign <= 0) return std::numeric_limits<double>::quiet_NaN();
        return v.loga;
    };
    return converges(f, logf, mode, lower, cfg);
}

} // namespace stieltjes::exprdsl
