#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "stieltjes/convex/legendre.hpp"
#include "stieltjes/convex/membership.hpp"
#include "stieltjes/convex/profile.hpp"
#include "stieltjes/convex/root_find.hpp"

using namespace stieltjes;
using namespace stieltjes::convex;
using exprdsl::parse;

TEST_CASE("invert_monotone: identity and closed-form inverse", "[convex]") {
    auto identity = [](double u) { return u; };
    CHECK(invert_monotone(identity, 3.0, 1e-12) == Catch::Approx(3.0).margin(1e-10));

    // G_*(x) = c e^{x/2}: G_*'(x) = (c/2) e^{x/2}; inverse at n is 2 log(2n/c)
    const double c = 0.7;
    auto d1 = [c](double x) { return 0.5 * c * std::exp(0.5 * x); };
    for (double n : {1.0, 10.0, 1e6}) {
        const double x = invert_monotone(d1, n, 1e-12);
        CHECK(x == Catch::Approx(2.0 * std::log(2.0 * n / c)).epsilon(1e-9));
    }
}

TEST_CASE("invert_monotone: target below the attainable range", "[convex]") {
    // Psi'(u) = log(u+1) + u/(u+1) on (0, inf) has infimum 0
    auto f = [](double u) { return std::log(u + 1) + u / (u + 1); };
    InvertOptions opt;
    opt.domain_lower = 0.0;
    CHECK_THROWS_AS(invert_monotone(f, -5.0, 1e-10, opt), RangeError);
}

TEST_CASE("legendre: parabola is self-dual", "[convex]") {
    auto g = make_profile(parse("x^2/2").expr);
    for (double x : {0.0, 1.0, 2.0})
        CHECK(legendre(g, x) == Catch::Approx(x * x / 2).margin(1e-12));

    // G(u) = t u^2/2 has conjugate x^2/(2t)
    const double t = 2.0;
    auto gt = make_profile(parse("x^2").expr); // t=2: t*u^2/2 = u^2
    for (double x : {0.5, 1.0, 3.0})
        CHECK(legendre(gt, x) == Catch::Approx(x * x / (2 * t)).margin(1e-12));
}

TEST_CASE("legendre: conjugate of e^{beta y} at integer arguments", "[convex]") {
    // sup_y (n y - e^{beta y}) = (n/beta)(log(n/beta) - 1)
    const double beta = 0.5;
    auto g = make_profile(parse("exp(0.5*x)").expr);
    for (double n : {1.0, 2.0, 8.0, 64.0}) {
        const double expected = (n / beta) * (std::log(n / beta) - 1.0);
        CHECK(legendre(g, n) == Catch::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("legendre_profile: conjugate derivatives and involution", "[convex]") {
    auto g = make_profile(parse("x^2/2").expr);
    auto gs = legendre_profile(g);
    CHECK(gs.d1(1.5) == Catch::Approx(1.5).margin(1e-10)); // G_*' = identity
    CHECK(gs.scale(2.0) == Catch::Approx(1.0).margin(1e-10));

    // s_{G_*} = sqrt(t) for G = t u^2 / 2
    auto gt = make_profile(parse("x^2").expr); // t = 2
    auto gts = legendre_profile(gt);
    CHECK(gts.scale(1.0) == Catch::Approx(std::sqrt(2.0)).epsilon(1e-9));

    // double conjugation returns G on a moderate grid
    auto g2 = make_profile(parse("x*log(x+1)").expr);
    auto g2s = legendre_profile(g2);
    auto g2ss = legendre_profile(g2s);
    for (double u : {2.0, 4.0, 16.0, 128.0, 1024.0}) {
        const double orig = g2.value(u);
        CHECK(std::abs(g2ss.value(u) - orig) / (1.0 + std::abs(orig)) < 1e-6);
    }
}

TEST_CASE("conjugate-derivative inversion identity", "[convex]") {
    auto g = make_profile(parse("x*log(x+1)").expr);
    auto gs = legendre_profile(g);
    for (double u : {1.0, 8.0, 64.0, 4096.0}) {
        const double x = g.d1(u);
        CHECK(std::abs(gs.d1(x) - u) <= 1e-8 * std::max(1.0, u));
    }
}

TEST_CASE("check_self_neglecting: labeled cases", "[convex]") {
    auto constant = [](double) { return 1.0; };
    CHECK(check_self_neglecting(constant).pass);

    auto sqrt_u = [](double u) { return std::sqrt(u); };
    CHECK(check_self_neglecting(sqrt_u).pass);

    auto linear = [](double u) { return u; };
    auto lin = check_self_neglecting(linear);
    CHECK_FALSE(lin.pass);

    // s(x) = e^{-x/4}/x
    auto hardy_scale = [](double x) { return std::exp(-x / 4) / x; };
    CHECK(check_self_neglecting(hardy_scale).pass);
}

TEST_CASE("self-neglecting implies s(u) = o(u) on the grid", "[convex]") {
    auto sqrt_u = [](double u) { return std::sqrt(u); };
    auto r = check_self_neglecting(sqrt_u);
    REQUIRE(r.pass);
    // ratio s(u)/u decreasing to ~0 along the tail
    const auto& us = r.u_grid;
    REQUIRE(us.size() >= 3);
    const double tail = std::sqrt(us.back()) / us.back();
    CHECK(tail < 1e-4);
}

TEST_CASE("closure under asymptotic equivalence (catalog pair)", "[convex]") {
    // (Psi'')^{-1/2} with Psi = u log(u+1) vs sqrt(u): both pass
    auto psi = make_profile(parse("x*log(x+1)").expr);
    auto ap = check_asymptotically_parabolic(psi);
    CHECK(ap.pass);
    auto sqrt_u = [](double u) { return std::sqrt(u); };
    CHECK(check_self_neglecting(sqrt_u).pass);
    // and the two are asymptotically equivalent
    const double u = 1e8;
    CHECK(psi.scale(u) / std::sqrt(u) == Catch::Approx(1.0).margin(1e-3));
}

TEST_CASE("check_asymptotically_parabolic: labeled cases", "[convex]") {
    CHECK(check_asymptotically_parabolic(make_profile(parse("x^2/2").expr)).pass);
    CHECK(check_asymptotically_parabolic(make_profile(parse("x*log(x+1)").expr)).pass);
    // affine G fails certification before any membership test
    CHECK_THROWS_AS(make_profile(parse("x").expr), CertificationError);
}

TEST_CASE("check_admissible: labeled cases", "[convex]") {
    // e^{x/2}: ratio explodes
    CHECK(check_admissible(make_profile(parse("exp(x/2)").expr)).pass);

    // x^lambda - x with lambda in (0,1) is concave: certification fails
    CHECK_THROWS_AS(make_profile(parse("x^0.5-x").expr), CertificationError);

    // G_* = x is affine: certification fails as well
    CHECK_THROWS_AS(make_profile(parse("x").expr), CertificationError);

    // kappa y log y: ratio kappa log y grows without bound (slowly)
    auto row4 = make_profile(parse("0.5*x*log(x)").expr);
    auto r = check_admissible(row4);
    CHECK(r.pass);

    // y^2: ratio y
    CHECK(check_admissible(make_profile(parse("x^2").expr)).pass);

    // superlinear-but-stalling growth: x*(2 - 1/log(x)) -> ratio stalls at 2
    auto stall = make_profile(parse("x*(2-1/log(x))").expr);
    auto rs = check_admissible(stall);
    CHECK_FALSE(rs.pass);
    CHECK(rs.inconclusive);
}

TEST_CASE("check_flat: labeled cases", "[convex]") {
    auto g = make_profile(parse("x^2/2").expr); // s_G = 1
    auto sg = [&g](double u) { return g.scale(u); };
    CHECK(check_flat(sg, g).pass);

    auto expu = [](double u) { return std::exp(u); };
    CHECK_FALSE(check_flat(expu, g).pass);

    auto logu = [](double u) { return std::log(u); };
    CHECK(check_flat(logu, g).pass);
}

TEST_CASE("dilate and scale preserve membership and move thresholds", "[convex]") {
    auto g = make_profile(parse("x^2/2").expr);
    auto d = dilate(g, 2.0);
    // dilate(u^2/2, 2) = 2u^2 with s = 1/2
    CHECK(d.value(3.0) == Catch::Approx(18.0));
    CHECK(d.scale(1.0) == Catch::Approx(0.5));
    CHECK(check_asymptotically_parabolic(d).pass);

    auto s = scale(g, 3.0);
    CHECK(s.value(2.0) == Catch::Approx(6.0));
    CHECK(check_asymptotically_parabolic(s).pass);

    // property: both transforms preserve the asymptotically parabolic class
    for (const char* src : {"x*log(x+1)", "exp(x/2)"}) {
        auto p = make_profile(parse(src).expr);
        for (double c : {0.5, 2.0}) {
            INFO(src << " with c=" << c);
            CHECK(check_asymptotically_parabolic(dilate(p, c)).pass);
            CHECK(check_asymptotically_parabolic(scale(p, c)).pass);
        }
    }
}

TEST_CASE("legendre involution across catalog profiles", "[convex]") {
    const char* profiles[] = {"x^2/2", "x^2", "x*log(x+1)", "0.5*x*log(x)"};
    for (const char* src : profiles) {
        auto g = make_profile(parse(src).expr);
        auto gs = legendre_profile(g);
        auto gss = legendre_profile(gs);
        double worst = 0;
        for (double u : {2.0, 8.0, 64.0, 512.0}) {
            const double orig = g.value(u);
            const double back = gss.value(u);
            worst = std::max(worst, std::abs(back - orig) / (1.0 + std::abs(orig)));
        }
        INFO(src);
        CHECK(worst <= 1e-5);
    }
}
