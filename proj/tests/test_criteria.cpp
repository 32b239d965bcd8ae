#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "stieltjes/criteria/classical.hpp"
#include "stieltjes/criteria/tauberian.hpp"
#include "stieltjes/criteria/thm11.hpp"
#include "stieltjes/criteria/thm13.hpp"
#include "stieltjes/oracle/moments.hpp"

using namespace stieltjes;
using namespace stieltjes::criteria;
using convex::make_profile;
using exprdsl::parse;
using oracle::Convergence;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

MomentSequence closed_form(const char* g_src) {
    MomentSequence m;
    auto g = parse(g_src).expr;
    m.log_m_expr = g;
    m.log_m = [g](double n) { return exprdsl::eval(g, n); };
    return m;
}
} // namespace

TEST_CASE("carleman: u log(u+1) family thresholds", "[criteria]") {
    // M(n) = e^{t n log(n+1)}: series (n+1)^{-t/2} diverges iff t <= 2
    auto m2 = closed_form("2*x*log(x+1)");
    CHECK(carleman(m2).verdict == Convergence::Diverges);
    auto m3 = closed_form("3*x*log(x+1)");
    CHECK(carleman(m3).verdict == Convergence::Converges);
}

TEST_CASE("carleman: exponential law via Stirling-scale terms", "[criteria]") {
    // M(n) = Gamma(n+1): M(n)^{1/(2n)} ~ sqrt(n/e), terms ~ n^{-1/2}: diverges
    MomentSequence m;
    m.log_m = [](double n) { return std::lgamma(n + 1.0); };
    m.provenance = MomentProvenance::NumericOracle;
    auto v = carleman(m);
    CHECK(v.verdict == Convergence::Diverges);
}

TEST_CASE("krein_pedersen: reference densities", "[criteria]") {
    // log-normal: -log nu(x) ~ (log x)^2/(2t) (+ lower order): converges
    NegLogDensity lognormal;
    lognormal.expr = parse("log(x)^2/2+log(x)").expr;
    lognormal.eval = [e = *lognormal.expr](double x) { return exprdsl::eval(e, x); };
    CHECK(krein_pedersen(lognormal, 0.0).verdict == Convergence::Converges);

    // nu(x) = e^{-x}: integrand x^2/(1+x^2) -> 1: diverges
    NegLogDensity expd;
    expd.expr = parse("x").expr;
    expd.eval = [](double x) { return x; };
    CHECK(krein_pedersen(expd, 0.0).verdict == Convergence::Diverges);

    // Table-1 row 4 shape: -log nu(x) = kappa (log x)(log log x): converges
    NegLogDensity row4;
    row4.expr = parse("log(x)*log(log(x))").expr;
    row4.eval = [](double x) { return std::log(x) * std::log(std::log(x)); };
    CHECK(krein_pedersen(row4, 0.0).verdict == Convergence::Converges);
}

TEST_CASE("krein_pedersen: rejects negative x0", "[criteria]") {
    NegLogDensity d;
    d.eval = [](double x) { return x; };
    CHECK_THROWS_AS(krein_pedersen(d, -1.0), InputError);
}

TEST_CASE("hardy_tail_equivalence: labeled cases", "[criteria]") {
    // tail e^{-2 sqrt(x)} with c=1: bounded product
    auto t1 = [](double x) { return -2.0 * std::sqrt(x); };
    CHECK(hardy_tail_equivalence(t1, 1.0).equivalent_bound_holds);

    // tail e^{-alpha sqrt(x)/log x}: fails for every c > 0
    auto t2 = [](double x) { return -std::sqrt(x) / std::log(x); };
    for (double c : {0.1, 1.0, 10.0}) {
        INFO("c = " << c);
        CHECK_FALSE(hardy_tail_equivalence(t2, c).equivalent_bound_holds);
    }

    // tail e^{-x}: super-Hardy decay, holds for every tested c
    auto t3 = [](double x) { return -x; };
    for (double c : {0.5, 1.0, 4.0}) CHECK(hardy_tail_equivalence(t3, c).equivalent_bound_holds);
}

TEST_CASE("thm11_integral: closed-form families", "[criteria]") {
    // G = t u^2/2, t=1: integrand (u^2/2) e^{-u/2}: converges
    CHECK(thm11_integral(make_profile(parse("x^2/2").expr)).verdict == Convergence::Converges);

    // G = t u log(u+1): integrand ~ t^2 e^{-t/2} u^{-t/2}: converges iff t > 2
    CHECK(thm11_integral(make_profile(parse("3*x*log(x+1)").expr)).verdict ==
          Convergence::Converges);
    CHECK(thm11_integral(make_profile(parse("2*x*log(x+1)").expr)).verdict ==
          Convergence::Diverges);

    // conjugate-side profile with G' ~ log u: G = u log u - u gives u^{-1/2}
    CHECK(thm11_integral(make_profile(parse("x*log(x)-x").expr)).verdict ==
          Convergence::Diverges);
}

TEST_CASE("thm11_extra_condition: boundary cases", "[criteria]") {
    // u e^{-u/2} -> 0
    CHECK(thm11_extra_condition(make_profile(parse("x^2/2").expr)).holds);

    // t Psi: true iff t >= 2
    CHECK(thm11_extra_condition(make_profile(parse("2*x*log(x+1)").expr)).holds);
    CHECK_FALSE(thm11_extra_condition(make_profile(parse("1.5*x*log(x+1)").expr)).holds);

    // G'(u) = 2 log u exactly: u e^{-log u} = 1, constant
    CHECK(thm11_extra_condition(make_profile(parse("2*x*log(x)-2*x").expr)).holds);
}

TEST_CASE("classify_from_moment_asymptote: log-normal and threshold family", "[criteria]") {
    // log-normal: indeterminate for every t > 0
    for (const char* g : {"0.5*x^2", "x^2", "2*x^2"}) {
        auto v = classify_from_moment_asymptote(make_profile(parse(g).expr), CondB::Verified);
        INFO(g);
        CHECK(v.outcome == Outcome::Indeterminate);
    }
    // t Psi: determinate iff t <= 2
    auto v15 = classify_from_moment_asymptote(make_profile(parse("1.5*x*log(x+1)").expr),
                                              CondB::Verified);
    CHECK(v15.outcome == Outcome::Determinate);
    auto v2 = classify_from_moment_asymptote(make_profile(parse("2*x*log(x+1)").expr),
                                             CondB::Verified);
    CHECK(v2.outcome == Outcome::Determinate);
    auto v3 = classify_from_moment_asymptote(make_profile(parse("3*x*log(x+1)").expr),
                                             CondB::Verified);
    CHECK(v3.outcome == Outcome::Indeterminate);
}

TEST_CASE("classify_from_moment_asymptote: gates respected", "[criteria]") {
    // without condition (b), a converging integral must NOT conclude
    auto v = classify_from_moment_asymptote(make_profile(parse("x^2/2").expr),
                                            CondB::Unavailable);
    CHECK(v.outcome == Outcome::Inconclusive);

    // ... but Carleman divergence still concludes without (b)
    auto v2 = classify_from_moment_asymptote(make_profile(parse("1.5*x*log(x+1)").expr),
                                             CondB::Unavailable);
    CHECK(v2.outcome == Outcome::Determinate);

    // evidence is sorted by criterion id
    for (std::size_t i = 1; i < v.evidence.size(); ++i)
        CHECK(v.evidence[i - 1].criterion <= v.evidence[i].criterion);
}

TEST_CASE("factorization_indeterminacy: exponential-law factor", "[criteria]") {
    auto g = make_profile(parse("x^2/2").expr);
    auto factorial = [](double n) { return std::tgamma(n + 1.0); };
    auto v = factorization_indeterminacy(g, factorial, CondB::Verified);
    CHECK(v.outcome == Outcome::Indeterminate);

    // vanishing factor is rejected
    auto vanishing = [](double n) { return std::abs(n - 5.0) < 0.5 ? 0.0 : 1.0; };
    CHECK_THROWS_AS(factorization_indeterminacy(g, vanishing, CondB::Verified), InputError);
}

TEST_CASE("thm13_sum: row-2 threshold and closed forms", "[criteria]") {
    // G_*(y) = e^{beta y}: terms (n/beta)^{-1/(2 beta)}
    CHECK(thm13_sum(make_profile(parse("exp(0.5*x)").expr)).verdict == Convergence::Diverges);
    CHECK(thm13_sum(make_profile(parse("exp(0.7*x)").expr)).verdict == Convergence::Diverges);
    CHECK(thm13_sum(make_profile(parse("exp(0.3*x)").expr)).verdict == Convergence::Converges);

    // G_*(y) = y^2: gamma(n) = n/2, sum e^{-n/4} converges
    CHECK(thm13_sum(make_profile(parse("x^2").expr)).verdict == Convergence::Converges);

    // Hardy profile c e^{x/2} + x/2: terms ~ c/(2n): diverges
    CHECK(thm13_sum(make_profile(parse("exp(x/2)+x/2").expr)).verdict == Convergence::Diverges);
}

TEST_CASE("thm13_extra_condition: labeled cases", "[criteria]") {
    // row 1: G_*' e^{-x/2} -> 0
    CHECK(thm13_extra_condition(make_profile(parse("exp(x/2)/x").expr)).holds);
    // e^{x}: G_*' e^{-x/2} = e^{x/2} unbounded
    CHECK_FALSE(thm13_extra_condition(make_profile(parse("exp(x)").expr)).holds);
    // polynomial: bounded
    CHECK(thm13_extra_condition(make_profile(parse("x^2").expr)).holds);
}

TEST_CASE("classify_from_density_asymptote: Table 1 verdicts", "[criteria]") {
    auto classify = [](const char* src, DensityRelation rel) {
        DensityAsymptote d;
        d.gstar = convex::SmoothFunction::from_expression(parse(src).expr);
        d.relation = rel;
        return classify_from_density_asymptote(d);
    };

    // row 1: alpha x^{-1} e^{x/2}, determinate for all alpha
    for (const char* src : {"0.5*exp(x/2)/x", "exp(x/2)/x", "5*exp(x/2)/x"}) {
        INFO(src);
        CHECK(classify(src, DensityRelation::TwoSided).outcome == Outcome::Determinate);
    }
    // row 2: e^{beta y}, determinate iff beta >= 1/2
    CHECK(classify("exp(0.5*x)", DensityRelation::TwoSided).outcome == Outcome::Determinate);
    CHECK(classify("exp(0.7*x)", DensityRelation::TwoSided).outcome == Outcome::Determinate);
    CHECK(classify("exp(0.3*x)", DensityRelation::TwoSided).outcome == Outcome::Indeterminate);
    // row 3: y^delta, indeterminate for delta > 1
    CHECK(classify("x^1.5", DensityRelation::TwoSided).outcome == Outcome::Indeterminate);
    CHECK(classify("x^2", DensityRelation::TwoSided).outcome == Outcome::Indeterminate);
    // row 4: kappa y log y, indeterminate for all kappa
    CHECK(classify("0.5*x*log(x)", DensityRelation::TwoSided).outcome ==
          Outcome::Indeterminate);
    CHECK(classify("2*x*log(x)", DensityRelation::TwoSided).outcome == Outcome::Indeterminate);
    // row 5: y^lambda - y fails certification; pipeline stays inconclusive
    auto r5 = classify("x^0.5-x", DensityRelation::TwoSided);
    CHECK(r5.outcome == Outcome::Inconclusive);
    bool saw_admissibility_failure = false;
    for (const auto& e : r5.evidence)
        if (e.criterion == "admissibility" && e.flag && !*e.flag) saw_admissibility_failure = true;
    CHECK(saw_admissibility_failure);

    // big-O relation only upgrades the determinate direction
    CHECK(classify("exp(0.5*x)", DensityRelation::BigO).outcome == Outcome::Determinate);
    CHECK(classify("exp(0.3*x)", DensityRelation::BigO).outcome == Outcome::Inconclusive);
}

TEST_CASE("dilation moves the row-2 threshold to c beta = 1/2", "[criteria]") {
    for (double c : {0.5, 1.0, 2.0}) {
        const double beta_det = 0.5 / c;        // c*beta = 1/2: determinate
        const double beta_indet = 0.45 / c;     // c*beta < 1/2: indeterminate
        for (bool det : {true, false}) {
            const double beta = det ? beta_det : beta_indet;
            auto base = make_profile(parse("exp(" + std::to_string(beta) + "*x)").expr);
            auto dilated = convex::dilate(base, c);
            DensityAsymptote d;
            d.gstar = dilated.fn();
            d.relation = DensityRelation::TwoSided;
            auto v = classify_from_density_asymptote(d);
            INFO("c=" << c << " beta=" << beta);
            CHECK(v.outcome == (det ? Outcome::Determinate : Outcome::Indeterminate));
        }
    }
}

TEST_CASE("scale leaves the row-2 threshold unchanged", "[criteria]") {
    for (double c : {0.5, 2.0}) {
        for (double beta : {0.45, 0.5}) {
            auto base = make_profile(parse("exp(" + std::to_string(beta) + "*x)").expr);
            auto scaled = convex::scale(base, c);
            DensityAsymptote d;
            d.gstar = scaled.fn();
            d.relation = DensityRelation::TwoSided;
            auto v = classify_from_density_asymptote(d);
            INFO("c=" << c << " beta=" << beta);
            CHECK(v.outcome ==
                  (beta >= 0.5 ? Outcome::Determinate : Outcome::Indeterminate));
        }
    }
}

TEST_CASE("equivalence chain of the density theorem", "[criteria]") {
    // wherever the extra condition holds and the relation is two-sided, the
    // sum, the G_* integral and the Krein integral agree
    const char* profiles[] = {"exp(x/2)/x", "exp(0.5*x)", "exp(0.7*x)", "exp(0.3*x)",
                              "x^1.5",      "x^2",        "0.5*x*log(x)"};
    for (const char* src : profiles) {
        auto p = make_profile(parse(src).expr);
        auto extra = thm13_extra_condition(p);
        if (!extra.holds) continue;
        auto sum = thm13_sum(p);
        auto integral = criteria::detail::gstar_exp_integral(p, default_config());
        auto krein = krein_pedersen(criteria::detail::neg_log_density_from_gstar(p), 0.0);
        INFO(src);
        REQUIRE(sum.verdict != Convergence::Inconclusive);
        CHECK(sum.verdict == integral.verdict);
        CHECK(sum.verdict == krein.verdict);
    }
}

TEST_CASE("equivalence chain of the moment theorem", "[criteria]") {
    // wherever the extra condition holds: thm11 integral, int e^{-G'/2} and
    // Carleman agree
    const char* profiles[] = {"x^2/2", "x^2", "2*x*log(x+1)", "2.5*x*log(x+1)",
                              "3*x*log(x+1)"};
    for (const char* src : profiles) {
        auto p = make_profile(parse(src).expr);
        if (!thm11_extra_condition(p).holds) continue;
        auto integral = thm11_integral(p);
        // int e^{-G'/2}
        using namespace exprdsl;
        ExprPtr damp = make_node(
            NodeKind::Exp, make_node(NodeKind::Neg, make_node(NodeKind::Div, *p.fn().sym_d1(),
                                                              make_const(2.0))));
        auto half = converges(damp, oracle::SumMode::Integral, p.grid().front());
        auto carl = carleman(closed_form(src));
        INFO(src);
        REQUIRE(integral.verdict != Convergence::Inconclusive);
        CHECK(integral.verdict == half.verdict);
        CHECK(integral.verdict == carl.verdict);
    }
}

TEST_CASE("tauberian_density_asymptote: log-normal recovery", "[criteria]") {
    // G(u) = u^2/2 predicts exactly the log-normal(t=1) density
    auto g = make_profile(parse("x^2/2").expr);
    auto pred = tauberian_density_asymptote(g);
    for (double x : {0.5, 1.0, 1.5, 2.0, 4.0}) {
        const double expect =
            std::exp(-std::log(x) * std::log(x) / 2) / (x * std::sqrt(2 * kPi));
        CHECK(std::abs(pred.density(x) - expect) <= 1e-12 * expect);
    }
    CHECK(pred.density(1.0) == Catch::Approx(1.0 / std::sqrt(2 * kPi)).epsilon(1e-12));

    // G = t u^2 / 2 predicts the log-normal(t) density
    const double t = 2.0;
    auto gt = make_profile(parse("x^2").expr);
    auto predt = tauberian_density_asymptote(gt);
    for (double x : {0.8, 1.0, 3.0}) {
        const double l = std::log(x);
        const double expect = std::exp(-l * l / (2 * t)) / (x * std::sqrt(2 * kPi * t));
        CHECK(predt.density(x) == Catch::Approx(expect).epsilon(1e-10));
    }
}

TEST_CASE("tauberian + brute moments round trip on the log-normal", "[criteria]") {
    auto g = make_profile(parse("x^2/2").expr);
    auto pred = tauberian_density_asymptote(g);
    for (double n : {1.0, 4.0, 10.0}) {
        auto m = oracle::brute_moments(pred.density, n);
        REQUIRE(m.converged);
        CHECK(std::abs(m.log_value - n * n / 2) <= 0.05); // within 5% of e^{n^2/2}
    }
}

TEST_CASE("stationary_excess: closed forms and normalization", "[criteria]") {
    // memorylessness: excess of e^{-x} is e^{-x}
    auto expd = [](double x) { return x >= 0 ? std::exp(-x) : 0.0; };
    auto excess = stationary_excess(expd, 1.0);
    for (double x : {0.0, 0.5, 2.0}) CHECK(excess(x) == Catch::Approx(std::exp(-x)).epsilon(1e-8));

    // uniform [0,1]: tail 1-x, M1 = 1/2: excess 2(1-x)
    auto uni = [](double x) { return (x >= 0 && x <= 1) ? 1.0 : 0.0; };
    auto uexcess = stationary_excess(uni, 0.5);
    CHECK(uexcess(0.25) == Catch::Approx(1.5).epsilon(1e-8));

    // half-normal: excess integrates to 1 within quadrature tolerance
    auto halfnormal = [](double x) {
        return x >= 0 ? std::sqrt(2.0 / kPi) * std::exp(-x * x / 2) : 0.0;
    };
    const double m1 = std::sqrt(2.0 / kPi);
    auto hexcess = stationary_excess(halfnormal, m1);
    auto total = oracle::quad(hexcess, 0.0, std::numeric_limits<double>::infinity(), 1e-8);
    CHECK(total.value == Catch::Approx(1.0).margin(1e-6));

    CHECK_THROWS_AS(stationary_excess(expd, 0.0), InputError);
}
