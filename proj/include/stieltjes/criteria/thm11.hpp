#pragma once

// The Tauberian moment-sequence criterion and its decision tree.  With
// M(n) ~ e^{G(n)}, G asymptotically parabolic (condition (a)) and the Esscher
// ratios Gaussian-dominated (condition (b)):
//
//   int (uG'(u) - G(u)) G''(u) e^{-G'(u)/2} du < inf   =>  indeterminate
//
// and when additionally  lim u e^{-G'(u)/2} < inf, the integral, the plain
// integral of e^{-G'/2} and Carleman's series all decide determinacy
// together.  The converse directions are never applied without their gates:
// the classical counterexamples show the ungated converses are false.

#include <cmath>
#include <functional>

#include "stieltjes/config.hpp"
#include "stieltjes/convex/membership.hpp"
#include "stieltjes/convex/profile.hpp"
#include "stieltjes/criteria/classical.hpp"
#include "stieltjes/criteria/types.hpp"

namespace stieltjes::criteria {

inline exprdsl::ConvergenceVerdict thm11_integral(const convex::ConvexProfile& g,
                                                  const ToolConfig& cfg = default_config()) {
    using namespace exprdsl;
    const double lower = g.grid().empty() ? std::max(1.0, g.lower() + 1.0) : g.grid().front();
    if (g.fn().sym()) {
        ExprPtr G = *g.fn().sym();
        ExprPtr G1 = *g.fn().sym_d1();
        ExprPtr G2 = *g.fn().sym_d2();
        ExprPtr bracket =
            make_node(NodeKind::Sub, make_node(NodeKind::Mul, make_var(), G1), G);
        ExprPtr damp = make_node(
            NodeKind::Exp,
            make_node(NodeKind::Neg, make_node(NodeKind::Div, G1, make_const(2.0))));
        ExprPtr integrand =
            make_node(NodeKind::Mul, make_node(NodeKind::Mul, bracket, G2), damp);
        return converges(integrand, SumMode::Integral, lower, cfg);
    }
    auto f = [&g](double u) {
        return (u * g.d1(u) - g.value(u)) * g.d2(u) * std::exp(-g.d1(u) / 2.0);
    };
    auto logf = [&g](double u) {
        const double bracket = u * g.d1(u) - g.value(u);
        const double dd = g.d2(u);
        if (!(bracket > 0) || !(dd > 0)) return std::numeric_limits<double>::quiet_NaN();
        return std::log(bracket) + std::log(dd) - g.d1(u) / 2.0;
    };
    return exprdsl::converges(f, logf, SumMode::Integral, lower, cfg);
}

// lim u e^{-G'(u)/2} < inf, tested as boundedness of the doubling-grid tail.
struct ExtraConditionResult {
    bool holds = false;
    std::vector<double> grid;
    std::vector<double> log_values;
};

inline ExtraConditionResult thm11_extra_condition(const convex::ConvexProfile& g,
                                                  const ToolConfig& cfg = default_config()) {
    ExtraConditionResult out;
    for (double u : g.grid()) {
        const double lv = std::log(u) - g.d1(u) / 2.0;
        if (!std::isfinite(lv)) continue;
        out.grid.push_back(u);
        out.log_values.push_back(lv);
    }
    (void)cfg;
    out.holds = detail::bounded_on_tail(out.log_values);
    return out;
}

namespace detail {

inline MomentSequence moment_sequence_from_profile(const convex::ConvexProfile& g) {
    MomentSequence m;
    if (g.fn().sym()) m.log_m_expr = *g.fn().sym();
    auto fn = g.fn().value_fn();
    m.log_m = [fn](double n) { return fn(n); };
    m.has_complex_line = false;
    m.provenance = MomentProvenance::ClosedForm;
    return m;
}

inline EvidenceEntry conv_evidence(std::string id, const exprdsl::ConvergenceVerdict& v,
                                   bool decisive = false) {
    EvidenceEntry e;
    e.criterion = std::move(id);
    e.kind = "convergence";
    e.conv = v;
    e.decisive = decisive;
    return e;
}

inline EvidenceEntry flag_evidence(std::string id, bool value, std::string detail = {}) {
    EvidenceEntry e;
    e.criterion = std::move(id);
    e.kind = "boolean";
    e.flag = value;
    e.detail = std::move(detail);
    return e;
}

inline EvidenceEntry note_evidence(std::string id, std::string detail) {
    EvidenceEntry e;
    e.criterion = std::move(id);
    e.kind = "note";
    e.detail = std::move(detail);
    return e;
}

} // namespace detail

// Decision tree for a moment sequence M(n) ~ e^{G(n)}:
//   1. condition (a): G asymptotically parabolic (computed here);
//   2. with condition (b) available: integral converges  => Indeterminate;
//   3. extra condition + integral diverges              => Determinate;
//   4. Carleman divergence (needs nothing further)      => Determinate;
//   5. otherwise Inconclusive, evidence attached.
inline Verdict classify_from_moment_asymptote(const convex::ConvexProfile& g, CondB cond_b,
                                              const ToolConfig& cfg = default_config()) {
    Verdict out;

    auto ap = convex::check_asymptotically_parabolic(g, cfg);
    {
        EvidenceEntry e = detail::flag_evidence("cond-a-ap-membership", ap.pass);
        e.metrics["max_tail_deviation"] = ap.max_tail_deviation;
        if (!ap.u_grid.empty()) e.metrics["horizon"] = ap.u_grid.back();
        e.detail = ap.note;
        out.evidence.push_back(e);
    }
    out.evidence.push_back(
        detail::flag_evidence("cond-b-esscher-domination", cond_b != CondB::Unavailable,
                              to_cstr(cond_b)));
    if (!ap.pass) {
        out.evidence.push_back(detail::note_evidence(
            "outcome", "condition (a) not established on the tested horizon"));
        out.sort_evidence();
        return out;
    }

    auto integral = thm11_integral(g, cfg);
    out.evidence.push_back(detail::conv_evidence("thm11-integral", integral));

    if (cond_b != CondB::Unavailable && integral.verdict == Convergence::Converges) {
        out.outcome = Outcome::Indeterminate;
        out.evidence.back().decisive = true;
        out.sort_evidence();
        return out;
    }

    auto extra = thm11_extra_condition(g, cfg);
    out.evidence.push_back(detail::flag_evidence("thm11-extra-condition", extra.holds));
    if (extra.holds && integral.verdict == Convergence::Diverges) {
        out.outcome = Outcome::Determinate;
        out.evidence.back().decisive = true;
        out.sort_evidence();
        return out;
    }

    auto carl = carleman(detail::moment_sequence_from_profile(g), cfg);
    out.evidence.push_back(detail::conv_evidence("carleman", carl));
    if (carl.verdict == Convergence::Diverges) {
        out.outcome = Outcome::Determinate;
        out.evidence.back().decisive = true;
        out.sort_evidence();
        return out;
    }

    out.evidence.push_back(detail::note_evidence(
        "outcome", "no criterion fired; converse directions stay gated"));
    out.sort_evidence();
    return out;
}

// Factorization: M_V(n) = M_nu(n) m(n) with m a non-vanishing moment sequence
// and M_nu satisfying the theorem's hypotheses; indeterminacy transfers.
inline Verdict factorization_indeterminacy(const convex::ConvexProfile& g,
                                           const std::function<double(double)>& m, CondB cond_b,
                                           const ToolConfig& cfg = default_config()) {
    for (double n = 0; n <= 64; n += 1.0)
        if (!(m(n) > 0.0))
            throw InputError("factorization_indeterminacy: m vanishes at n=" +
                             std::to_string(n));
    for (double n = 128; n <= std::pow(2.0, cfg.horizon_exp); n *= 2.0)
        if (!(m(n) > 0.0))
            throw InputError("factorization_indeterminacy: m vanishes at n=" +
                             std::to_string(n));

    Verdict out;
    auto ap = convex::check_asymptotically_parabolic(g, cfg);
    out.evidence.push_back(detail::flag_evidence("cond-a-ap-membership", ap.pass, ap.note));
    out.evidence.push_back(
        detail::flag_evidence("cond-b-esscher-domination", cond_b != CondB::Unavailable,
                              to_cstr(cond_b)));
    auto integral = thm11_integral(g, cfg);
    out.evidence.push_back(detail::conv_evidence("thm11-integral", integral));
    out.evidence.push_back(detail::note_evidence("factor", "m(n) > 0 checked on the horizon"));
    if (ap.pass && cond_b != CondB::Unavailable && integral.verdict == Convergence::Converges) {
        out.outcome = Outcome::Indeterminate;
        out.sort_evidence();
        return out;
    }
    out.sort_evidence();
    return out;
}

} // namespace stieltjes::criteria
