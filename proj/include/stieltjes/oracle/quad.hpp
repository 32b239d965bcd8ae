#pragma once

// Adaptive Gauss-Kronrod (7,15) quadrature with bisection refinement.
// Semi-infinite and doubly-infinite ranges are mapped to (0,1] with the
// rational substitution x = a + (1-t)/t.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <vector>

#include "stieltjes/errors.hpp"

namespace stieltjes::oracle {

using Evaluator = std::function<double(double)>;

struct QuadResult {
    double value = 0.0;
    double error = 0.0; // estimated absolute error
    bool converged = false;
    long evals = 0;
    double worst_lo = 0.0, worst_hi = 0.0; // interval with the largest residual error
};

namespace detail {

// QUADPACK dqk15 nodes and weights.
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double lo, hi, value, err;
    bool operator<(const Panel& o) const { return err < o.err; }
};

inline Panel gk15(const Evaluator& f, double lo, double hi, long& evals) {
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    // nodes are interior; keep them so even when rounding would land on an
    // endpoint (integrable endpoint singularities rely on this)
    auto interior = [lo, hi](double x) {
        if (x <= lo) return std::nextafter(lo, hi);
        if (x >= hi) return std::nextafter(hi, lo);
        return x;
    };
    const double fc = f(c);
    evals += 15;
    double resg = fc * kWg[3];
    double resk = fc * kWgk[7];
    double fv[14];
    for (int j = 0; j < 7; ++j) {
        const double absc = h * kXgk[j];
        fv[j] = f(interior(c - absc));
        fv[7 + j] = f(interior(c + absc));
        const double fsum = fv[j] + fv[7 + j];
        resk += kWgk[j] * fsum;
        if (j % 2 == 1) resg += kWg[j / 2] * fsum; // xgk odd indices are the Gauss nodes
    }
    const double reskh = resk * 0.5;
    double resasc = kWgk[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (std::abs(fv[j] - reskh) + std::abs(fv[7 + j] - reskh));
    resasc *= h;
    double err = std::abs((resk - resg) * h);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    return Panel{lo, hi, resk * h, err};
}

inline QuadResult adaptive(const Evaluator& f, double lo, double hi, double tol, long budget) {
    QuadResult out;
    std::priority_queue<Panel> q;
    // start with a few panels so sharply-localized integrands are not missed
    const int n0 = 8;
    double total = 0.0, toterr = 0.0;
    for (int i = 0; i < n0; ++i) {
        Panel p = gk15(f, lo + (hi - lo) * i / n0, lo + (hi - lo) * (i + 1) / n0, out.evals);
        total += p.value;
        toterr += p.err;
        q.push(p);
    }
    while (!q.empty() && toterr > tol * std::max(1.0, std::abs(total)) && out.evals < budget) {
        Panel p = q.top();
        q.pop();
        total -= p.value;
        toterr -= p.err;
        const double mid = 0.5 * (p.lo + p.hi);
        if (mid <= p.lo || mid >= p.hi) { // cannot split further
            total += p.value;
            toterr += p.err;
            break;
        }
        Panel l = gk15(f, p.lo, mid, out.evals);
        Panel r = gk15(f, mid, p.hi, out.evals);
        total += l.value + r.value;
        toterr += l.err + r.err;
        q.push(l);
        q.push(r);
    }
    out.value = total;
    out.error = toterr;
    out.converged = toterr <= tol * std::max(1.0, std::abs(total)) && std::isfinite(total);
    if (!q.empty()) {
        out.worst_lo = q.top().lo;
        out.worst_hi = q.top().hi;
    }
    return out;
}

} // namespace detail

// Integrate f over (a, b); b may be +infinity and a may be -infinity.
// error <= tol * (1 + |result|) on success; on budget exhaustion the partial
// result and its error bound are returned with converged = false.
inline QuadResult quad(const Evaluator& f, double a, double b, double tol = 1e-9,
                       long budget = 400000) {
    const double inf = std::numeric_limits<double>::infinity();
    if (a == -inf && b == inf) {
        QuadResult l = quad(f, a, 0.0, tol / 2, budget / 2);
        QuadResult r = quad(f, 0.0, b, tol / 2, budget / 2);
        return QuadResult{l.value + r.value, l.error + r.error, l.converged && r.converged,
                          l.evals + r.evals, r.worst_lo, r.worst_hi};
    }
    if (b == inf) {
        // x = a + (1-t)/t, dx = -dt/t^2, t in (0,1]; the lower cutoff keeps
        // t^2 away from underflow (covers x up to ~1e150)
        auto g = [&f, a](double t) {
            const double x = a + (1.0 - t) / t;
            const double v = f(x);
            return v / (t * t);
        };
        return detail::adaptive(g, 1e-150, 1.0, tol, budget);
    }
    if (a == -inf) {
        auto mirrored = [&f](double x) { return f(-x); };
        return quad(mirrored, -b, inf, tol, budget);
    }
    if (!(a < b)) return QuadResult{0.0, 0.0, true, 0};
    return detail::adaptive(f, a, b, tol, budget);
}

} // namespace stieltjes::oracle
