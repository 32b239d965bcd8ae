#pragma once

// Characteristic-function inversion by uniform trapezoid sums:
//   f(y) = (1/2pi) int e^{-iuy} phi(u) du = (1/pi) Re int_0^inf e^{-iuy} phi(u) du
// for real-valued densities.  Truncation comes from an analytic Gaussian
// envelope |phi(u)| <= envelope_amp * exp(-gauss_factor u^2 / 2); the step is
// chosen against the aliasing band.  Deterministic given the grid parameters.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "stieltjes/errors.hpp"

namespace stieltjes::oracle {

using CharFn = std::function<std::complex<double>(double)>;

struct FourierOptions {
    double gauss_factor = 0.0; // t*sigma^2 of the Gaussian envelope; must be > 0
    double envelope_amp = 1.0; // bound on |phi| against the pure Gaussian factor
    double tol = 1e-10;        // target truncation/aliasing error
    double alias_halfwidth = 50.0; // assumed effective support radius of the density
};

struct FourierResult {
    std::vector<double> y;
    std::vector<double> density;
    double cutoff = 0.0;
    double step = 0.0;
    long evals = 0;
};

inline FourierResult fourier_invert_density(const CharFn& phi, const std::vector<double>& y_grid,
                                            FourierOptions opt) {
    if (!(opt.gauss_factor > 0.0))
        throw InputError("fourier_invert_density: characteristic function must carry a "
                         "Gaussian factor (sigma^2 t > 0) for certified truncation");
    // truncation U: envelope tail below tol
    double U = 1.0;
    auto tail = [&](double u) {
        return opt.envelope_amp * std::exp(-0.5 * opt.gauss_factor * u * u) /
               std::max(1.0, opt.gauss_factor * u);
    };
    while (tail(U) > 0.25 * opt.tol && U < 1e6) U *= 1.25;

    double ymax = 1.0;
    for (double y : y_grid) ymax = std::max(ymax, std::abs(y));
    const double period_needed = 2.0 * (ymax + opt.alias_halfwidth);
    const double h = std::min(0.02, 2.0 * 3.141592653589793 / period_needed);
    const long n = static_cast<long>(U / h) + 1;

    // phi evaluated once per node, reused across the y-grid
    std::vector<std::complex<double>> ph(n + 1);
    for (long k = 0; k <= n; ++k) ph[k] = phi(k * h);

    FourierResult out;
    out.cutoff = U;
    out.step = h;
    out.evals = n + 1;
    out.y = y_grid;
    out.density.resize(y_grid.size());
    for (std::size_t j = 0; j < y_grid.size(); ++j) {
        const double y = y_grid[j];
        double acc = 0.5 * ph[0].real(); // trapezoid endpoint at u=0
        for (long k = 1; k <= n; ++k) {
            const double u = k * h;
            const std::complex<double> e(std::cos(u * y), -std::sin(u * y));
            acc += (ph[k] * e).real();
        }
        out.density[j] = acc * h / 3.141592653589793;
    }
    return out;
}

} // namespace stieltjes::oracle
