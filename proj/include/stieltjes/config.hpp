#pragma once

#include <cstdint>

namespace stieltjes {

// Tolerances and horizons shared across the analysis pipeline.  Every verdict
// produced by the library can be reproduced from the inputs plus one of these.
struct ToolConfig {
    // root finding (invert_monotone): |f(x)-y| <= root_tol * max(1,|y|)
    double root_tol = 1e-10;
    // limit acceptance for membership tests (self-neglecting, flatness)
    double limit_tol = 1e-3;
    // adaptive quadrature relative tolerance
    double quad_tol = 1e-9;
    // doubling grid for profiles and membership checks: u in {2^grid_k_lo .. 2^grid_k_hi}
    int grid_k_lo = 4;
    int grid_k_hi = 40;
    // w-net for the locally-uniform limits: w in [w_lo, w_hi], w_points samples
    double w_lo = -3.0;
    double w_hi = 3.0;
    int w_points = 13;
    // series / integral horizon for block extrapolation: x up to 2^horizon_exp
    int horizon_exp = 20;
    // block extrapolation thresholds (see oracle::block_extrapolate)
    double geo_decay_slope = -0.05;   // log S_k vs k slope for geometric decay
    double power_conv_eps = 0.2;      // fitted eps with S_k ~ k^{-(1+eps)} => converges
    double power_div_eps = 0.05;      // fitted eps below this => diverges (c/k bound)
    // asymptotic classifier ladder: evaluation points 2^k, k in [ladder_k_lo, ladder_k_hi]
    int ladder_k_lo = 12;
    int ladder_k_hi = 40;
    int ladder_step = 4;
    // snapping tolerance for threshold comparisons of fitted exponents
    double snap_tol = 1e-6;
    // minimal fitted Gaussian-envelope constant accepted by condition (b)
    double envelope_c_min = 1e-8;
    // RNG seed echoed into reports (the pipeline itself is deterministic)
    std::uint64_t seed = 0;
};

inline const ToolConfig& default_config() {
    static const ToolConfig cfg{};
    return cfg;
}

} // namespace stieltjes
