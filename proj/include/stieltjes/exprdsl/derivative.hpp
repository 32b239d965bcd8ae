#pragma once

// Symbolic differentiation with light algebraic cleanup.  The simplifier only
// folds constants and removes identity operations; it is not a CAS.

#include "stieltjes/exprdsl/expr.hpp"

namespace stieltjes::exprdsl {

namespace detail {

inline ExprPtr s_neg(const ExprPtr& a);

inline ExprPtr s_add(const ExprPtr& a, const ExprPtr& b) {
    if (is_const(a) && is_const(b)) return make_const(a->num + b->num);
    if (is_const(a, 0)) return b;
    if (is_const(b, 0)) return a;
    if (b->kind == NodeKind::Neg) return make_node(NodeKind::Sub, a, b->lhs);
    return make_node(NodeKind::Add, a, b);
}

inline ExprPtr s_sub(const ExprPtr& a, const ExprPtr& b) {
    if (is_const(a) && is_const(b)) return make_const(a->num - b->num);
    if (is_const(b, 0)) return a;
    if (is_const(a, 0)) return s_neg(b);
    if (b->kind == NodeKind::Neg) return s_add(a, b->lhs);
    return make_node(NodeKind::Sub, a, b);
}

inline ExprPtr s_mul(const ExprPtr& a, const ExprPtr& b) {
    if (is_const(a) && is_const(b)) return make_const(a->num * b->num);
    if (is_const(a, 0) || is_const(b, 0)) return make_const(0);
    if (is_const(a, 1)) return b;
    if (is_const(b, 1)) return a;
    if (a->kind == NodeKind::Neg) return s_neg(s_mul(a->lhs, b));
    if (b->kind == NodeKind::Neg) return s_neg(s_mul(a, b->lhs));
    return make_node(NodeKind::Mul, a, b);
}

inline ExprPtr s_div(const ExprPtr& a, const ExprPtr& b) {
    if (is_const(a, 0)) return make_const(0);
    if (is_const(b, 1)) return a;
    if (is_const(a) && is_const(b) && b->num != 0) return make_const(a->num / b->num);
    if (a->kind == NodeKind::Neg) return s_neg(s_div(a->lhs, b));
    if (b->kind == NodeKind::Neg) return s_neg(s_div(a, b->lhs));
    return make_node(NodeKind::Div, a, b);
}

inline ExprPtr s_neg(const ExprPtr& a) {
    if (is_const(a)) return make_const(-a->num);
    if (a->kind == NodeKind::Neg) return a->lhs;
    return make_node(NodeKind::Neg, a);
}

inline ExprPtr s_pow(const ExprPtr& a, double p) {
    if (p == 0) return make_const(1);
    if (p == 1) return a;
    if (is_const(a)) return make_const(std::pow(a->num, p));
    if (a->kind == NodeKind::Pow) return make_pow(a->lhs, a->num * p);
    return make_pow(a, p);
}

} // namespace detail

inline ExprPtr differentiate(const ExprPtr& e) {
    using namespace detail;
    switch (e->kind) {
    case NodeKind::Constant: return make_const(0);
    case NodeKind::Variable: return make_const(1);
    case NodeKind::Add: return s_add(differentiate(e->lhs), differentiate(e->rhs));
    case NodeKind::Sub: return s_sub(differentiate(e->lhs), differentiate(e->rhs));
    case NodeKind::Mul:
        return s_add(s_mul(differentiate(e->lhs), e->rhs), s_mul(e->lhs, differentiate(e->rhs)));
    case NodeKind::Div:
        // (a/b)' = a'/b - a b'/b^2
        return s_sub(s_div(differentiate(e->lhs), e->rhs),
                     s_div(s_mul(e->lhs, differentiate(e->rhs)), s_pow(e->rhs, 2)));
    case NodeKind::Pow:
        // (a^p)' = p a^(p-1) a'
        return s_mul(make_const(e->num), s_mul(s_pow(e->lhs, e->num - 1), differentiate(e->lhs)));
    case NodeKind::Exp: return s_mul(e, differentiate(e->lhs));
    case NodeKind::Log: return s_div(differentiate(e->lhs), e->lhs);
    case NodeKind::Neg: return s_neg(differentiate(e->lhs));
    }
    return make_const(std::numeric_limits<double>::quiet_NaN());
}

} // namespace stieltjes::exprdsl
