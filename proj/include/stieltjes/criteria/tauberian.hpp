#pragma once

// Saddle-point density prediction from a moment asymptote, and the
// stationary-excess device.  With M(n) ~ e^{G(n)}, G asymptotically
// parabolic, the measure has a density with
//
//   nu(x) ~ (2 pi)^{-1/2} e^{-G_*(log x)} / (x s_{G_*}(log x)).

#include <cmath>
#include <functional>

#include "stieltjes/config.hpp"
#include "stieltjes/convex/legendre.hpp"
#include "stieltjes/convex/membership.hpp"
#include "stieltjes/criteria/types.hpp"
#include "stieltjes/oracle/quad.hpp"

namespace stieltjes::criteria {

struct TauberianDensity {
    std::function<double(double)> density;      // x -> predicted nu(x)
    std::function<double(double)> log_density;  // x -> log predicted nu(x)
    convex::ConvexProfile conjugate;            // G_* used by the prediction
};

inline TauberianDensity tauberian_density_asymptote(const convex::ConvexProfile& g,
                                                    const ToolConfig& cfg = default_config()) {
    auto ap = convex::check_asymptotically_parabolic(g, cfg);
    if (!ap.pass)
        throw CertificationError(
            "tauberian_density_asymptote: G not asymptotically parabolic on the tested horizon");
    auto conj = convex::legendre_profile(g, cfg.root_tol * 1e-2);
    auto shared = std::make_shared<convex::ConvexProfile>(conj);
    const double half_log_2pi = 0.5 * std::log(2.0 * 3.141592653589793);
    auto logd = [shared, half_log_2pi](double x) {
        const double y = std::log(x);
        const double scale = shared->scale(y); // s_{G_*}(y)
        return -half_log_2pi - shared->value(y) - y - std::log(scale);
    };
    auto dens = [logd](double x) {
        const double v = logd(x);
        return v < -745.0 ? 0.0 : std::exp(v);
    };
    return TauberianDensity{dens, logd, std::move(conj)};
}

// Stationary-excess density x -> tail(x) / M_1; determinacy of the excess law
// transfers back to the original measure.
inline std::function<double(double)> stationary_excess(
    const std::function<double(double)>& density, double first_moment,
    const ToolConfig& cfg = default_config()) {
    if (!(first_moment > 0)) throw InputError("stationary_excess: M1 must be positive");
    const double tol = cfg.quad_tol;
    return [density, first_moment, tol](double x) {
        auto tail = oracle::quad(density, x, std::numeric_limits<double>::infinity(), tol);
        return tail.value / first_moment;
    };
}

} // namespace stieltjes::criteria
