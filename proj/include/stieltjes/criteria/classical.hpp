#pragma once

// The classical determinacy criteria:
//
//   Carleman:        sum M(n)^{-1/(2n)} = inf      => determinate
//   Krein/Pedersen:  int_{x0} -log nu(x^2)/(1+x^2) dx < inf  => indeterminate
//   Hardy:           int e^{c sqrt(x)} nu(dx) < inf for some c > 0
//                    <=> tail(x) = O(e^{-c sqrt(x) - log(x)/2})  => determinate

#include <cmath>
#include <functional>

#include "stieltjes/config.hpp"
#include "stieltjes/criteria/types.hpp"
#include "stieltjes/exprdsl/convergence.hpp"
#include "stieltjes/exprdsl/derivative.hpp"

namespace stieltjes::criteria {

using exprdsl::ConvergenceVerdict;
using oracle::Convergence;
using oracle::SumMode;

// Series verdict on sum_n M(n)^{-1/(2n)}.  Divergence is the classical
// determinacy signal; the mapping to a Verdict happens in the classifiers.
inline ConvergenceVerdict carleman(const MomentSequence& m,
                                   const ToolConfig& cfg = default_config()) {
    using namespace exprdsl;
    if (m.log_m_expr) {
        // term(n) = exp(-G(n) / (2n))
        ExprPtr g = *m.log_m_expr;
        ExprPtr term = make_node(
            NodeKind::Exp,
            make_node(NodeKind::Neg,
                      make_node(NodeKind::Div, g,
                                make_node(NodeKind::Mul, make_const(2.0), make_var()))));
        double lower = 1.0;
        try {
            lower = std::max(1.0, domain_lower_bound(g));
        } catch (const DomainError&) {
        }
        return converges(term, SumMode::Series, lower, cfg);
    }
    auto logf = [&m](double n) { return -m.log_m(n) / (2.0 * n); };
    auto f = [logf](double n) { return std::exp(logf(n)); };
    // pre: M evaluable on the horizon
    for (double n : {1.0, 64.0, std::pow(2.0, cfg.horizon_exp)}) {
        if (!std::isfinite(m.log_m(n))) {
            ConvergenceVerdict v;
            v.note = "moment sequence not evaluable up to the horizon";
            return v;
        }
    }
    return exprdsl::converges(f, logf, SumMode::Series, 1.0, cfg);
}

// Pedersen's integral from x0 (x0 = 0 recovers Krein's original criterion).
// The effective lower limit is max(x0, l, 2) where l is the first doubling
// point with -log nu(x^2) > 0, mirroring the "take l large enough so that
// G_*(x) > 0" device.
struct NegLogDensity {
    std::function<double(double)> eval; // x -> -log nu(x)
    std::optional<exprdsl::ExprPtr> expr;
};

inline ConvergenceVerdict krein_pedersen(const NegLogDensity& neg_log_density, double x0,
                                         const ToolConfig& cfg = default_config()) {
    using namespace exprdsl;
    if (x0 < 0) throw InputError("krein_pedersen: x0 must be >= 0");
    double positive_from = 2.0;
    for (double x = 2.0; x <= std::pow(2.0, 30); x *= 2.0) {
        if (neg_log_density.eval(x * x) > 0) {
            positive_from = x;
            break;
        }
    }
    const double start = std::max({x0, positive_from, 2.0});
    if (neg_log_density.expr) {
        ExprPtr xsq = make_pow(make_var(), 2.0);
        ExprPtr num = substitute(*neg_log_density.expr, xsq);
        ExprPtr den = make_node(NodeKind::Add, make_const(1.0), make_pow(make_var(), 2.0));
        return converges(make_node(NodeKind::Div, num, den), SumMode::Integral, start, cfg);
    }
    auto f = [&neg_log_density](double x) {
        return neg_log_density.eval(x * x) / (1.0 + x * x);
    };
    auto logf = [&neg_log_density](double x) {
        const double v = neg_log_density.eval(x * x);
        if (!(v > 0)) return std::numeric_limits<double>::quiet_NaN();
        return std::log(v) - std::log1p(x * x);
    };
    return exprdsl::converges(f, logf, SumMode::Integral, start, cfg);
}

struct HardyResult {
    bool equivalent_bound_holds = false; // tail(x) = O(e^{-c sqrt(x) - log(x)/2})
    std::vector<double> grid;
    std::vector<double> log_products; // log( tail(x) e^{c sqrt(x)} sqrt(x) )
    std::string note;
};

// Tail-side test of Hardy's condition at a given c, from a log-scale tail
// evaluator (x -> log tail(x); tails below double range stay usable).
inline HardyResult hardy_tail_equivalence(const std::function<double(double)>& log_tail, double c,
                                          const ToolConfig& cfg = default_config()) {
    HardyResult out;
    for (double k = cfg.grid_k_lo; k <= cfg.grid_k_hi; k += 1.0) {
        const double x = std::pow(2.0, k);
        const double lt = log_tail(x);
        if (!std::isfinite(lt)) continue;
        // tail must live in [0,1]
        if (lt > 1e-9) {
            out.note = "tail exceeds 1 at x=" + std::to_string(x);
            return out;
        }
        out.grid.push_back(x);
        out.log_products.push_back(lt + c * std::sqrt(x) + 0.5 * std::log(x));
    }
    if (out.log_products.size() < 4) {
        out.note = "too few usable grid points";
        return out;
    }
    out.equivalent_bound_holds = detail::bounded_on_tail(out.log_products);
    if (!out.equivalent_bound_holds) out.note = "product grows along the tail";
    return out;
}

// Linear-scale convenience overload (usable while the tail stays above the
// underflow threshold).
inline HardyResult hardy_tail_equivalence_linear(const std::function<double(double)>& tail,
                                                 double c,
                                                 const ToolConfig& cfg = default_config()) {
    auto log_tail = [&tail](double x) {
        const double v = tail(x);
        if (!(v >= 0.0) || v > 1.0 + 1e-12) return std::numeric_limits<double>::quiet_NaN();
        return v > 0 ? std::log(v) : -std::numeric_limits<double>::infinity();
    };
    return hardy_tail_equivalence(log_tail, c, cfg);
}

} // namespace stieltjes::criteria
