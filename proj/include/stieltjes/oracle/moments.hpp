#pragma once

// Brute-force moments and the Laplace-method moment asymptote.
//
// brute_moments integrates x^n density(x) in log coordinates with the peak
// shifted out, so large n stays well-conditioned.
//
// laplace_moment_asymptote returns log of  sqrt(2 pi) / s_G(n) * e^{G(n)}
// with G the conjugate of the supplied profile; its cross-check is a direct
// quadrature of int e^{ny - G_*(y)} dy.

#include <cmath>
#include <functional>

#include "stieltjes/convex/legendre.hpp"
#include "stieltjes/convex/profile.hpp"
#include "stieltjes/oracle/quad.hpp"

namespace stieltjes::oracle {

struct LogScaleIntegral {
    double log_value = 0.0;
    bool converged = false;
    long evals = 0;
};

// log of int_{lo}^{hi} exp(g(y)) dy via peak shifting; assumes g unimodal-ish
// and integrable.  Scans for the maximum, then integrates exp(g - gmax).
inline LogScaleIntegral log_integral_exp(const std::function<double(double)>& g, double lo,
                                         double hi, double tol = 1e-9) {
    // coarse scan for the peak
    double ymax = lo, gmax = -std::numeric_limits<double>::infinity();
    const double span_hi = std::isfinite(hi) ? hi : std::max(lo + 1.0, 1.0) * 1e6;
    for (int i = 0; i <= 2000; ++i) {
        const double y = lo + (span_hi - lo) * i / 2000.0;
        const double v = g(y);
        if (std::isfinite(v) && v > gmax) {
            gmax = v;
            ymax = y;
        }
    }
    // golden-section polish around the scan winner
    {
        double a = std::max(lo, ymax - (span_hi - lo) / 1000.0);
        double b = std::min(span_hi, ymax + (span_hi - lo) / 1000.0);
        const double gr = 0.6180339887498949;
        double c = b - gr * (b - a), d = a + gr * (b - a);
        for (int it = 0; it < 120 && (b - a) > 1e-12 * (1.0 + std::abs(a)); ++it) {
            if (g(c) > g(d)) {
                b = d;
            } else {
                a = c;
            }
            c = b - gr * (b - a);
            d = a + gr * (b - a);
        }
        const double y = 0.5 * (a + b);
        const double v = g(y);
        if (v > gmax) {
            gmax = v;
            ymax = y;
        }
    }
    auto shifted = [&g, gmax](double y) {
        const double v = g(y) - gmax;
        return v < -745.0 ? 0.0 : std::exp(v);
    };
    // the shifted integrand underflows to exactly zero outside a window around
    // the peak; find that window and integrate it split at the peak so the
    // adaptive rule sees the mass
    double right = ymax, w = 1.0;
    while (right < hi && g(right) - gmax > -746.0) {
        right = std::min(hi, right + w);
        w *= 2.0;
    }
    double left = ymax;
    w = 1.0;
    while (left > lo && g(left) - gmax > -746.0) {
        left = std::max(lo, left - w);
        w *= 2.0;
    }
    QuadResult ql = quad(shifted, left, ymax, tol / 2);
    QuadResult qr = quad(shifted, ymax, right, tol / 2);
    LogScaleIntegral out;
    const double total = ql.value + qr.value;
    out.converged = ql.converged && qr.converged && total > 0;
    out.log_value = gmax + std::log(total);
    out.evals = ql.evals + qr.evals;
    return out;
}

struct MomentResult {
    double value = 0.0;     // may overflow to inf for large n
    double log_value = 0.0; // always finite when the integral converged
    bool converged = false;
    long evals = 0;
};

// n-th moment of a (sub)probability density on (0, inf).
inline MomentResult brute_moments(const std::function<double(double)>& density, double n,
                                  double tol = 1e-9) {
    auto g = [&density, n](double y) {
        const double x = std::exp(y);
        const double d = density(x);
        if (!(d > 0.0)) return -std::numeric_limits<double>::infinity();
        // x^n density(x) dx = e^{(n+1)y} density(e^y) dy
        return (n + 1.0) * y + std::log(d);
    };
    // y capped where x = e^y stays representable
    LogScaleIntegral li = log_integral_exp(g, -40.0, 709.0, tol);
    MomentResult out;
    out.log_value = li.log_value;
    out.value = std::exp(li.log_value);
    out.converged = li.converged;
    out.evals = li.evals;
    return out;
}

// Moment of a density on a finite or half-infinite interval in linear scale
// (small n convenience used by the stationary-excess checks).
inline MomentResult brute_moments_linear(const std::function<double(double)>& density, double n,
                                         double lo, double hi, double tol = 1e-9) {
    QuadResult q = quad([&density, n](double x) { return std::pow(x, n) * density(x); }, lo, hi,
                        tol);
    MomentResult out;
    out.value = q.value;
    out.log_value = q.value > 0 ? std::log(q.value) : -std::numeric_limits<double>::infinity();
    out.converged = q.converged;
    out.evals = q.evals;
    return out;
}

struct LaplaceAsymptote {
    double log_asymptote = 0.0;  // log( sqrt(2 pi) / s_G(n) * e^{G(n)} )
    double gamma_n = 0.0;        // maximizer gamma(n) = (G_*')^{-1}(n)
    double log_quadrature = 0.0; // log of the direct integral, for cross-checks
    bool quadrature_converged = false;
};

inline LaplaceAsymptote laplace_moment_asymptote(const convex::ConvexProfile& gstar, double n,
                                                 double tol = 1e-10) {
    LaplaceAsymptote out;
    const double gamma = convex::invert_derivative(gstar, n, tol);
    out.gamma_n = gamma;
    const double G_n = n * gamma - gstar.value(gamma);       // conjugate value
    const double gpp = 1.0 / gstar.d2(gamma);                // G''(n)
    out.log_asymptote = 0.5 * std::log(2.0 * 3.141592653589793) + 0.5 * std::log(gpp) + G_n;

    auto g = [&gstar, n](double y) { return n * y - gstar.value(y); };
    const double lo = std::isfinite(gstar.lower()) ? gstar.lower() + 1e-9 : -1e6;
    LogScaleIntegral li = log_integral_exp(g, lo, std::numeric_limits<double>::infinity(), 1e-9);
    out.log_quadrature = li.log_value;
    out.quadrature_converged = li.converged;
    return out;
}

} // namespace stieltjes::oracle
