#pragma once

// A twice differentiable function on a half-line (a, inf), with evaluators for
// f, f', f''.  Symbolic sources carry exact derivative trees; numeric sources
// use central differences (step h = max(1e-5, 1e-5|u|)) with one Richardson
// extrapolation level.

#include <cmath>
#include <functional>
#include <limits>
#include <optional>

#include "stieltjes/exprdsl/derivative.hpp"
#include "stieltjes/exprdsl/expr.hpp"

namespace stieltjes::convex {

enum class SourceKind { Symbolic, Numeric };

class SmoothFunction {
public:
    static SmoothFunction from_expression(const exprdsl::ExprPtr& e) {
        SmoothFunction s;
        s.source_ = SourceKind::Symbolic;
        s.sym_ = e;
        s.sym_d1_ = exprdsl::differentiate(e);
        s.sym_d2_ = exprdsl::differentiate(*s.sym_d1_);
        s.lower_ = exprdsl::domain_lower_bound(e);
        auto e0 = e, e1 = *s.sym_d1_, e2 = *s.sym_d2_;
        s.f_ = [e0](double u) { return exprdsl::eval(e0, u); };
        s.d1_ = [e1](double u) { return exprdsl::eval(e1, u); };
        s.d2_ = [e2](double u) { return exprdsl::eval(e2, u); };
        return s;
    }

    static SmoothFunction from_callback(std::function<double(double)> f, double lower,
                                        double step_scale = 1e-5) {
        SmoothFunction s;
        s.source_ = SourceKind::Numeric;
        s.lower_ = lower;
        s.fd_step_ = step_scale;
        s.f_ = f;
        s.d1_ = [f, step_scale](double u) {
            const double h = std::max(step_scale, step_scale * std::abs(u));
            auto cd = [&](double hh) { return (f(u + hh) - f(u - hh)) / (2 * hh); };
            return (4 * cd(h / 2) - cd(h)) / 3.0;
        };
        s.d2_ = [f, step_scale](double u) {
            const double h = std::max(step_scale, step_scale * std::abs(u));
            auto cd2 = [&](double hh) {
                return (f(u + hh) - 2 * f(u) + f(u - hh)) / (hh * hh);
            };
            return (4 * cd2(h / 2) - cd2(h)) / 3.0;
        };
        return s;
    }

    static SmoothFunction from_callbacks(std::function<double(double)> f,
                                         std::function<double(double)> d1,
                                         std::function<double(double)> d2, double lower) {
        SmoothFunction s;
        s.source_ = SourceKind::Numeric;
        s.lower_ = lower;
        s.f_ = std::move(f);
        s.d1_ = std::move(d1);
        s.d2_ = std::move(d2);
        return s;
    }

    double operator()(double u) const { return f_(u); }
    double d1(double u) const { return d1_(u); }
    double d2(double u) const { return d2_(u); }
    double lower() const { return lower_; }
    SourceKind source() const { return source_; }
    double fd_step_scale() const { return fd_step_; }

    const std::optional<exprdsl::ExprPtr>& sym() const { return sym_; }
    const std::optional<exprdsl::ExprPtr>& sym_d1() const { return sym_d1_; }
    const std::optional<exprdsl::ExprPtr>& sym_d2() const { return sym_d2_; }

    const std::function<double(double)>& value_fn() const { return f_; }
    const std::function<double(double)>& d1_fn() const { return d1_; }
    const std::function<double(double)>& d2_fn() const { return d2_; }

private:
    SourceKind source_ = SourceKind::Numeric;
    double lower_ = -std::numeric_limits<double>::infinity();
    double fd_step_ = 0.0;
    std::function<double(double)> f_, d1_, d2_;
    std::optional<exprdsl::ExprPtr> sym_, sym_d1_, sym_d2_;
};

} // namespace stieltjes::convex
