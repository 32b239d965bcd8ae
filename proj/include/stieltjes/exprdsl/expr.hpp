#pragma once

// Exp-log expression trees in one real variable.
//
// Grammar (whitespace insignificant, variable name configurable, default "x"):
//   expr   := ['-'] term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' signed-number)?
//   base   := number | ident | '(' expr ')' | func '(' expr ')'
//   func   := 'exp' | 'log' | 'sqrt' | 'abs'
//
// sqrt(e) is stored as e^0.5 and abs(e) as (e^2)^0.5; both round-trip through
// the canonical printed form.

#include <cassert>
#include <charconv>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "stieltjes/errors.hpp"

namespace stieltjes::exprdsl {

enum class NodeKind { Constant, Variable, Add, Sub, Mul, Div, Pow, Exp, Log, Neg };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    NodeKind kind;
    double num = 0.0; // Constant value, or Pow exponent
    ExprPtr lhs, rhs; // children (rhs only for binary kinds)
};

inline ExprPtr make_const(double v) {
    return std::make_shared<Expr>(Expr{NodeKind::Constant, v, nullptr, nullptr});
}
inline ExprPtr make_var() {
    return std::make_shared<Expr>(Expr{NodeKind::Variable, 0.0, nullptr, nullptr});
}
inline ExprPtr make_node(NodeKind k, ExprPtr a, ExprPtr b = nullptr) {
    // canonical form: negation never wraps a constant or another negation
    if (k == NodeKind::Neg) {
        if (a->kind == NodeKind::Constant) return make_const(-a->num);
        if (a->kind == NodeKind::Neg) return a->lhs;
    }
    return std::make_shared<Expr>(Expr{k, 0.0, std::move(a), std::move(b)});
}
inline ExprPtr make_pow(ExprPtr base, double exponent) {
    auto e = std::make_shared<Expr>(Expr{NodeKind::Pow, exponent, std::move(base), nullptr});
    return e;
}

inline bool is_const(const ExprPtr& e) { return e->kind == NodeKind::Constant; }
inline bool is_const(const ExprPtr& e, double v) {
    return e->kind == NodeKind::Constant && e->num == v;
}

inline bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a.get() == b.get()) return true;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
    case NodeKind::Constant: return a->num == b->num;
    case NodeKind::Variable: return true;
    case NodeKind::Pow:
        return a->num == b->num && structurally_equal(a->lhs, b->lhs);
    case NodeKind::Exp:
    case NodeKind::Log:
    case NodeKind::Neg:
        return structurally_equal(a->lhs, b->lhs);
    default:
        return structurally_equal(a->lhs, b->lhs) && structurally_equal(a->rhs, b->rhs);
    }
}

// Replace every Variable leaf by `replacement`.
inline ExprPtr substitute(const ExprPtr& e, const ExprPtr& replacement) {
    switch (e->kind) {
    case NodeKind::Constant: return e;
    case NodeKind::Variable: return replacement;
    case NodeKind::Pow: return make_pow(substitute(e->lhs, replacement), e->num);
    case NodeKind::Exp:
    case NodeKind::Log:
    case NodeKind::Neg:
        return make_node(e->kind, substitute(e->lhs, replacement));
    default:
        return make_node(e->kind, substitute(e->lhs, replacement),
                         substitute(e->rhs, replacement));
    }
}

// ---------------------------------------------------------------------------
// Evaluation

template <class T>
T eval(const ExprPtr& e, T x) {
    switch (e->kind) {
    case NodeKind::Constant: return T(e->num);
    case NodeKind::Variable: return x;
    case NodeKind::Add: return eval(e->lhs, x) + eval(e->rhs, x);
    case NodeKind::Sub: return eval(e->lhs, x) - eval(e->rhs, x);
    case NodeKind::Mul: return eval(e->lhs, x) * eval(e->rhs, x);
    case NodeKind::Div: return eval(e->lhs, x) / eval(e->rhs, x);
    case NodeKind::Pow: {
        using std::pow;
        return pow(eval(e->lhs, x), T(e->num));
    }
    case NodeKind::Exp: {
        using std::exp;
        return exp(eval(e->lhs, x));
    }
    case NodeKind::Log: {
        using std::log;
        return log(eval(e->lhs, x));
    }
    case NodeKind::Neg: return -eval(e->lhs, x);
    }
    return T(std::numeric_limits<double>::quiet_NaN());
}

// Sign/log-magnitude representation: value = sign * exp(loga).  Keeps huge
// arguments (u up to ~2^1000) evaluable without overflow; `poisoned` marks a
// catastrophic cancellation where the magnitude can no longer be trusted.
struct SignedLog {
    int sign = 0; // -1, 0, +1
    double loga = -std::numeric_limits<double>::infinity();
    bool poisoned = false;

    double value() const {
        if (sign == 0) return 0.0;
        return sign * std::exp(loga);
    }
};

namespace detail {

inline SignedLog sl_poison() {
    return SignedLog{0, std::numeric_limits<double>::quiet_NaN(), true};
}

inline SignedLog sl_add(const SignedLog& a, const SignedLog& b) {
    if (a.poisoned || b.poisoned) return sl_poison();
    if (a.sign == 0) return b;
    if (b.sign == 0) return a;
    const double hi = std::max(a.loga, b.loga);
    const double lo = std::min(a.loga, b.loga);
    const double d = hi - lo;
    if (a.sign == b.sign)
        return SignedLog{a.sign, hi + std::log1p(std::exp(-d)), false};
    // opposite signs: relative error of the difference blows up as d -> 0
    if (d <= 1e-11) return sl_poison();
    const int sign = (a.loga > b.loga) ? a.sign : b.sign;
    return SignedLog{sign, hi + std::log1p(-std::exp(-d)), false};
}

inline SignedLog sl_neg(SignedLog a) {
    a.sign = -a.sign;
    return a;
}

inline SignedLog sl_mul(const SignedLog& a, const SignedLog& b) {
    if (a.poisoned || b.poisoned) return sl_poison();
    if (a.sign == 0 || b.sign == 0) return SignedLog{};
    return SignedLog{a.sign * b.sign, a.loga + b.loga, false};
}

inline SignedLog sl_div(const SignedLog& a, const SignedLog& b) {
    if (a.poisoned || b.poisoned || b.sign == 0) return sl_poison();
    if (a.sign == 0) return SignedLog{};
    return SignedLog{a.sign * b.sign, a.loga - b.loga, false};
}

inline bool is_integer(double p) { return std::floor(p) == p && std::abs(p) < 1e15; }

} // namespace detail

inline SignedLog log_eval(const ExprPtr& e, double x) {
    using namespace detail;
    switch (e->kind) {
    case NodeKind::Constant: {
        const double v = e->num;
        if (v == 0.0) return SignedLog{};
        return SignedLog{v > 0 ? 1 : -1, std::log(std::abs(v)), false};
    }
    case NodeKind::Variable: {
        if (x == 0.0) return SignedLog{};
        return SignedLog{x > 0 ? 1 : -1, std::log(std::abs(x)), false};
    }
    case NodeKind::Add: return sl_add(log_eval(e->lhs, x), log_eval(e->rhs, x));
    case NodeKind::Sub: return sl_add(log_eval(e->lhs, x), sl_neg(log_eval(e->rhs, x)));
    case NodeKind::Mul: return sl_mul(log_eval(e->lhs, x), log_eval(e->rhs, x));
    case NodeKind::Div: return sl_div(log_eval(e->lhs, x), log_eval(e->rhs, x));
    case NodeKind::Pow: {
        SignedLog a = log_eval(e->lhs, x);
        if (a.poisoned) return sl_poison();
        const double p = e->num;
        if (a.sign == 0) return (p > 0) ? SignedLog{} : sl_poison();
        if (a.sign < 0) {
            if (!is_integer(p)) return sl_poison();
            const long long ip = static_cast<long long>(p);
            return SignedLog{(ip % 2 == 0) ? 1 : -1, p * a.loga, false};
        }
        return SignedLog{1, p * a.loga, false};
    }
    case NodeKind::Exp: {
        SignedLog a = log_eval(e->lhs, x);
        if (a.poisoned) return sl_poison();
        const double v = a.value(); // exponent must itself be representable
        if (!std::isfinite(v)) {
            if (v < 0) return SignedLog{}; // exp(-inf) = 0
            return sl_poison();
        }
        return SignedLog{1, v, false};
    }
    case NodeKind::Log: {
        SignedLog a = log_eval(e->lhs, x);
        if (a.poisoned || a.sign <= 0) return sl_poison();
        const double v = a.loga; // log of the child value
        if (v == 0.0) return SignedLog{};
        return SignedLog{v > 0 ? 1 : -1, std::log(std::abs(v)), false};
    }
    case NodeKind::Neg: return sl_neg(log_eval(e->lhs, x));
    }
    return sl_poison();
}

// ---------------------------------------------------------------------------
// Canonical printing

namespace detail {

inline std::string num_to_string(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline bool is_atomic_base(const ExprPtr& e) {
    return e->kind == NodeKind::Variable ||
           (e->kind == NodeKind::Constant && e->num >= 0);
}

inline void print_rec(const ExprPtr& e, const std::string& var, std::string& out);

inline void print_paren(const ExprPtr& e, const std::string& var, std::string& out) {
    out += '(';
    print_rec(e, var, out);
    out += ')';
}

inline bool is_negative_leaf(const ExprPtr& e) {
    return e->kind == NodeKind::Constant && e->num < 0;
}

inline void print_rec(const ExprPtr& e, const std::string& var, std::string& out) {
    auto print_operand = [&](const ExprPtr& c, bool needs_paren) {
        if (needs_paren || is_negative_leaf(c))
            print_paren(c, var, out);
        else
            print_rec(c, var, out);
    };
    switch (e->kind) {
    case NodeKind::Constant: out += num_to_string(e->num); return;
    case NodeKind::Variable: out += var; return;
    case NodeKind::Add:
        print_rec(e->lhs, var, out);
        out += '+';
        print_operand(e->rhs, e->rhs->kind == NodeKind::Add || e->rhs->kind == NodeKind::Sub ||
                                  e->rhs->kind == NodeKind::Neg);
        return;
    case NodeKind::Sub:
        print_rec(e->lhs, var, out);
        out += '-';
        print_operand(e->rhs, e->rhs->kind == NodeKind::Add || e->rhs->kind == NodeKind::Sub ||
                                  e->rhs->kind == NodeKind::Neg);
        return;
    case NodeKind::Mul: {
        const bool lp = e->lhs->kind == NodeKind::Add || e->lhs->kind == NodeKind::Sub ||
                        e->lhs->kind == NodeKind::Neg;
        const bool rp = e->rhs->kind == NodeKind::Add || e->rhs->kind == NodeKind::Sub ||
                        e->rhs->kind == NodeKind::Mul || e->rhs->kind == NodeKind::Div ||
                        e->rhs->kind == NodeKind::Neg;
        print_operand(e->lhs, lp);
        out += '*';
        print_operand(e->rhs, rp);
        return;
    }
    case NodeKind::Div: {
        const bool lp = e->lhs->kind == NodeKind::Add || e->lhs->kind == NodeKind::Sub ||
                        e->lhs->kind == NodeKind::Neg;
        const bool rp = e->rhs->kind == NodeKind::Add || e->rhs->kind == NodeKind::Sub ||
                        e->rhs->kind == NodeKind::Mul || e->rhs->kind == NodeKind::Div ||
                        e->rhs->kind == NodeKind::Neg;
        print_operand(e->lhs, lp);
        out += '/';
        print_operand(e->rhs, rp);
        return;
    }
    case NodeKind::Pow:
        print_operand(e->lhs, !is_atomic_base(e->lhs));
        out += '^';
        out += num_to_string(e->num);
        return;
    case NodeKind::Exp:
        out += "exp";
        print_paren(e->lhs, var, out);
        return;
    case NodeKind::Log:
        out += "log";
        print_paren(e->lhs, var, out);
        return;
    case NodeKind::Neg:
        out += '-';
        print_operand(e->lhs, e->lhs->kind == NodeKind::Add || e->lhs->kind == NodeKind::Sub ||
                                  e->lhs->kind == NodeKind::Neg);
        return;
    }
}

} // namespace detail

inline std::string to_string(const ExprPtr& e, const std::string& var = "x") {
    std::string out;
    detail::print_rec(e, var, out);
    return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

class Parser {
public:
    Parser(std::string_view text, std::string_view var) : text_(text), var_(var) {}

    ExprPtr run() {
        ExprPtr e = parse_expr();
        skip_ws();
        if (pos_ != text_.size())
            throw SyntaxError("unexpected trailing input", pos_);
        return e;
    }

private:
    std::string_view text_;
    std::string_view var_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    ExprPtr parse_expr() {
        bool neg = false;
        skip_ws();
        if (eat('-')) neg = true;
        ExprPtr e = parse_term();
        if (neg) e = negate(e);
        for (;;) {
            if (eat('+'))
                e = make_node(NodeKind::Add, e, parse_term());
            else if (eat('-'))
                e = make_node(NodeKind::Sub, e, parse_term());
            else
                break;
        }
        return e;
    }

    ExprPtr negate(const ExprPtr& e) { return make_node(NodeKind::Neg, e); }

    ExprPtr parse_term() {
        ExprPtr e = parse_factor();
        for (;;) {
            if (eat('*'))
                e = make_node(NodeKind::Mul, e, parse_factor());
            else if (eat('/'))
                e = make_node(NodeKind::Div, e, parse_factor());
            else
                break;
        }
        return e;
    }

    ExprPtr parse_factor() {
        ExprPtr base = parse_base();
        if (eat('^')) {
            double p = parse_signed_number();
            return make_pow(base, p);
        }
        return base;
    }

    double parse_signed_number() {
        skip_ws();
        std::size_t start = pos_;
        if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
        double v = parse_number_tail(start);
        return v;
    }

    double parse_number_tail(std::size_t start) {
        std::size_t p = pos_;
        while (p < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[p])) || text_[p] == '.'))
            ++p;
        if (p < text_.size() && (text_[p] == 'e' || text_[p] == 'E')) {
            std::size_t q = p + 1;
            if (q < text_.size() && (text_[q] == '+' || text_[q] == '-')) ++q;
            if (q < text_.size() && std::isdigit(static_cast<unsigned char>(text_[q]))) {
                ++q;
                while (q < text_.size() && std::isdigit(static_cast<unsigned char>(text_[q]))) ++q;
                p = q;
            }
        }
        double value = 0;
        auto res = std::from_chars(text_.data() + start, text_.data() + p, value);
        if (res.ec != std::errc{} || res.ptr != text_.data() + p)
            throw SyntaxError("malformed number", start);
        pos_ = p;
        return value;
    }

    ExprPtr parse_base() {
        skip_ws();
        if (pos_ >= text_.size()) throw SyntaxError("unexpected end of input", pos_);
        char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return make_const(parse_number_tail(pos_));
        }
        if (c == '(') {
            ++pos_;
            ExprPtr e = parse_expr();
            if (!eat(')')) throw SyntaxError("expected ')'", pos_);
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            std::string_view name = text_.substr(start, pos_ - start);
            if (name == "exp" || name == "log" || name == "sqrt" || name == "abs") {
                if (!eat('(')) throw SyntaxError("expected '(' after function name", pos_);
                ExprPtr arg = parse_expr();
                if (!eat(')')) throw SyntaxError("expected ')'", pos_);
                if (name == "exp") return make_node(NodeKind::Exp, arg);
                if (name == "log") return make_node(NodeKind::Log, arg);
                if (name == "sqrt") return make_pow(arg, 0.5);
                return make_pow(make_pow(arg, 2.0), 0.5); // abs
            }
            if (name == var_) return make_var();
            throw SyntaxError("unknown identifier '" + std::string(name) + "'", start);
        }
        throw SyntaxError(std::string("unexpected character '") + c + "'", pos_);
    }
};

} // namespace detail

// ---------------------------------------------------------------------------
// Natural domain: conservative lower bound of the half-line of definition.

namespace detail {

enum class ConstraintKind { Positive, Nonzero };

inline void collect_constraints(const ExprPtr& e,
                                std::vector<std::pair<ExprPtr, ConstraintKind>>& out) {
    switch (e->kind) {
    case NodeKind::Constant:
    case NodeKind::Variable:
        return;
    case NodeKind::Log:
        out.emplace_back(e->lhs, ConstraintKind::Positive);
        collect_constraints(e->lhs, out);
        return;
    case NodeKind::Pow:
        if (!is_integer(e->num)) out.emplace_back(e->lhs, ConstraintKind::Positive);
        else if (e->num < 0) out.emplace_back(e->lhs, ConstraintKind::Nonzero);
        collect_constraints(e->lhs, out);
        return;
    case NodeKind::Div:
        out.emplace_back(e->rhs, ConstraintKind::Nonzero);
        collect_constraints(e->lhs, out);
        collect_constraints(e->rhs, out);
        return;
    case NodeKind::Exp:
    case NodeKind::Neg:
        collect_constraints(e->lhs, out);
        return;
    default:
        collect_constraints(e->lhs, out);
        collect_constraints(e->rhs, out);
        return;
    }
}

inline std::vector<double> domain_sample_points() {
    std::vector<double> xs;
    for (double m = 1e12; m >= 1e-6; m /= 4.0) xs.push_back(-m);
    for (double x = -16.0; x <= 16.0; x += 0.25) xs.push_back(x);
    for (double m = 1e-6; m <= 1e12; m *= 4.0) xs.push_back(m);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

// sign of the constraint expression, or 0 where it is zero/untrusted
inline int constraint_sign(const ExprPtr& c, double x) {
    SignedLog v = log_eval(c, x);
    if (v.poisoned) return 0;
    return v.sign;
}

} // namespace detail

// Largest point below which some log/pow/div constraint fails; -inf when the
// expression is entire.  Throws DomainError when no half-line exists.
inline double domain_lower_bound(const ExprPtr& e) {
    using namespace detail;
    std::vector<std::pair<ExprPtr, ConstraintKind>> cs;
    collect_constraints(e, cs);
    if (cs.empty()) return -std::numeric_limits<double>::infinity();

    static const std::vector<double> xs = domain_sample_points();
    double bound = -std::numeric_limits<double>::infinity();
    for (auto& [c, kind] : cs) {
        auto ok = [&](double x) {
            int s = constraint_sign(c, x);
            return kind == ConstraintKind::Positive ? (s > 0) : (s != 0);
        };
        // find last violated sample
        std::ptrdiff_t last_bad = -1;
        for (std::size_t i = 0; i < xs.size(); ++i)
            if (!ok(xs[i])) last_bad = static_cast<std::ptrdiff_t>(i);
        if (last_bad < 0) {
            // also look for sign changes of Nonzero constraints (roots)
            if (kind == ConstraintKind::Nonzero) {
                for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
                    int s1 = constraint_sign(c, xs[i]), s2 = constraint_sign(c, xs[i + 1]);
                    if (s1 != 0 && s2 != 0 && s1 != s2) {
                        double lo = xs[i], hi = xs[i + 1];
                        for (int it = 0; it < 100; ++it) {
                            double mid = 0.5 * (lo + hi);
                            (constraint_sign(c, mid) == s1 ? lo : hi) = mid;
                        }
                        bound = std::max(bound, hi);
                    }
                }
            }
            continue;
        }
        if (static_cast<std::size_t>(last_bad) + 1 >= xs.size())
            throw DomainError("no half-line of definition: constraint fails for arbitrarily large arguments");
        // refine the crossing between the last violated and the next valid sample
        double lo = xs[last_bad], hi = xs[last_bad + 1];
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            (ok(mid) ? hi : lo) = mid;
        }
        bound = std::max(bound, hi);
    }
    return bound;
}

struct ParsedExpression {
    ExprPtr expr;
    double domain_lower; // natural lower bound a of the half-line (a, inf)
};

inline ParsedExpression parse(std::string_view text, std::string_view var = "x") {
    detail::Parser p(text, var);
    ExprPtr e = p.run();
    return ParsedExpression{e, domain_lower_bound(e)};
}

} // namespace stieltjes::exprdsl
