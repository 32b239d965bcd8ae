#pragma once

// The Abelian density-side criterion.  With nu(x) = O(e^{-G_*(log x)}) (or the
// tail variant) for admissible G_*, and gamma the inverse of G_*':
//
//   sum e^{-gamma(n)/2} = inf   =>  determinate
//
// and with the two-sided comparison plus  lim G_*'(x) e^{-x/2} < inf,
// indeterminacy is equivalent to the sum converging, to the integral
// int G_*(x) e^{-x/2} dx converging, and to the Krein/Pedersen integral
// converging.

#include <cmath>
#include <functional>

#include "stieltjes/config.hpp"
#include "stieltjes/convex/legendre.hpp"
#include "stieltjes/convex/membership.hpp"
#include "stieltjes/criteria/thm11.hpp"
#include "stieltjes/criteria/types.hpp"

namespace stieltjes::criteria {

inline exprdsl::ConvergenceVerdict thm13_sum(const convex::ConvexProfile& gstar,
                                             const ToolConfig& cfg = default_config()) {
    const double tol = cfg.root_tol;
    auto shared = std::make_shared<convex::ConvexProfile>(gstar);
    auto gamma = [shared, tol](double n) {
        return convex::invert_derivative(*shared, n, tol);
    };
    auto logf = [gamma](double n) {
        try {
            return -gamma(n) / 2.0;
        } catch (const RangeError& e) {
            // gamma(n) beyond double range: the term underflows to zero
            if (e.side() == RangeSide::Above)
                return -std::numeric_limits<double>::infinity();
            return std::numeric_limits<double>::quiet_NaN();
        }
    };
    auto f = [logf](double n) {
        const double v = logf(n);
        if (v == -std::numeric_limits<double>::infinity()) return 0.0;
        return std::isfinite(v) ? std::exp(v) : std::numeric_limits<double>::quiet_NaN();
    };
    // start the series where gamma(n) lands inside the certified grid
    double lower = 1.0;
    if (!gstar.grid().empty()) {
        const double d = gstar.d1(gstar.grid().front());
        if (std::isfinite(d)) lower = std::max(1.0, d);
    }
    try {
        return exprdsl::converges(f, logf, oracle::SumMode::Series, lower, cfg);
    } catch (const RangeError& e) {
        exprdsl::ConvergenceVerdict v;
        v.note = std::string("inversion failed: ") + e.what();
        return v;
    }
}

// lim G_*'(x) e^{-x/2} < inf along the doubling grid.
inline ExtraConditionResult thm13_extra_condition(const convex::ConvexProfile& gstar,
                                                  const ToolConfig& cfg = default_config()) {
    ExtraConditionResult out;
    (void)cfg;
    for (double x : gstar.grid()) {
        const double d = gstar.d1(x);
        if (!(d > 0) || !std::isfinite(d)) continue;
        out.grid.push_back(x);
        out.log_values.push_back(std::log(d) - x / 2.0);
    }
    out.holds = detail::bounded_on_tail(out.log_values);
    return out;
}

namespace detail {

// int G_*(x) e^{-x/2} dx, the middle link of the equivalence chain
inline exprdsl::ConvergenceVerdict gstar_exp_integral(const convex::ConvexProfile& gstar,
                                                      const ToolConfig& cfg) {
    using namespace exprdsl;
    const double lower =
        gstar.grid().empty() ? std::max(1.0, gstar.lower() + 1.0) : gstar.grid().front();
    if (gstar.fn().sym()) {
        ExprPtr damp = make_node(
            NodeKind::Exp, make_node(NodeKind::Neg,
                                     make_node(NodeKind::Div, make_var(), make_const(2.0))));
        return converges(make_node(NodeKind::Mul, *gstar.fn().sym(), damp),
                         oracle::SumMode::Integral, lower, cfg);
    }
    auto f = [&gstar](double x) { return gstar.value(x) * std::exp(-x / 2.0); };
    auto logf = [&gstar](double x) {
        const double v = gstar.value(x);
        if (!(v > 0)) return std::numeric_limits<double>::quiet_NaN();
        return std::log(v) - x / 2.0;
    };
    return exprdsl::converges(f, logf, oracle::SumMode::Integral, lower, cfg);
}

inline NegLogDensity neg_log_density_from_gstar(const convex::ConvexProfile& gstar) {
    NegLogDensity out;
    auto fn = gstar.fn().value_fn();
    out.eval = [fn](double x) { return fn(std::log(x)); };
    if (gstar.fn().sym()) {
        using namespace exprdsl;
        out.expr = substitute(*gstar.fn().sym(), make_node(NodeKind::Log, make_var()));
    }
    return out;
}

} // namespace detail

// Decision tree for a density/tail comparison against e^{-G_*(log x)}.
inline Verdict classify_from_density_asymptote(const DensityAsymptote& d,
                                               const ToolConfig& cfg = default_config()) {
    Verdict out;
    out.evidence.push_back(
        detail::note_evidence("relation", std::string(to_cstr(d.relation)) +
                                              (d.asserted_by_user ? " (user-asserted)" : "")));
    if (d.relation == DensityRelation::TailBigO)
        out.evidence.push_back(detail::note_evidence(
            "stationary-excess", "tail variant handled via the stationary-excess reduction; "
                                 "the comparison hypothesis is an asserted input"));

    // certification + admissibility gate
    std::optional<convex::ConvexProfile> profile;
    try {
        profile.emplace(convex::make_profile(d.gstar, cfg));
    } catch (const CertificationError& e) {
        out.evidence.push_back(detail::flag_evidence("admissibility", false,
                                                     std::string("certification failed: ") +
                                                         e.what()));
        out.sort_evidence();
        return out;
    }
    auto ap = convex::check_asymptotically_parabolic(*profile, cfg);
    {
        EvidenceEntry e = detail::flag_evidence("ap-membership", ap.pass, ap.note);
        e.metrics["max_tail_deviation"] = ap.max_tail_deviation;
        out.evidence.push_back(e);
    }
    auto adm = convex::check_admissible(*profile, cfg);
    out.evidence.push_back(detail::flag_evidence("admissibility", adm.pass, adm.note));
    if (!ap.pass || !adm.pass) {
        out.sort_evidence();
        return out;
    }

    auto sum = thm13_sum(*profile, cfg);
    out.evidence.push_back(detail::conv_evidence("thm13-sum", sum));

    if (d.relation == DensityRelation::BigO || d.relation == DensityRelation::TailBigO) {
        if (sum.verdict == Convergence::Diverges) {
            out.outcome = Outcome::Determinate;
            out.evidence.back().decisive = true;
        }
        out.sort_evidence();
        return out;
    }

    // two-sided comparison: the full equivalence chain applies under the gate
    auto extra = thm13_extra_condition(*profile, cfg);
    out.evidence.push_back(detail::flag_evidence("thm13-extra-condition", extra.holds));
    out.evidence.push_back(
        detail::conv_evidence("gstar-exp-integral", detail::gstar_exp_integral(*profile, cfg)));
    out.evidence.push_back(detail::conv_evidence(
        "krein-pedersen",
        krein_pedersen(detail::neg_log_density_from_gstar(*profile), 0.0, cfg)));

    if (sum.verdict == Convergence::Diverges) {
        out.outcome = Outcome::Determinate; // one-sided direction, no gate needed
        out.sort_evidence();
        return out;
    }
    if (extra.holds && sum.verdict == Convergence::Converges) {
        out.outcome = Outcome::Indeterminate;
        out.sort_evidence();
        return out;
    }
    out.sort_evidence();
    return out;
}

} // namespace stieltjes::criteria
