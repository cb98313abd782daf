#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "psidocalc/calculus.hpp"
#include "psidocalc/expr_text.hpp"
#include "test_helpers.hpp"

#include <cmath>

using namespace psido;
using psido::testing::dense_amplitude_apply;
using psido::testing::gaussian_grid;

static SymbolExpr S(const std::string& s, int n = 1) {
    return SymbolExpr(parse_poly(s, n, VarSpace::Symbol));
}
static AmplitudeExpr A(const std::string& s, int n = 1) {
    return SymbolExpr(parse_poly(s, n, VarSpace::Amplitude));
}
static WeightPtr JB(int n = 1) {
    return std::make_shared<WeightFunction>(WeightFunction::japanese_bracket(n));
}
static std::vector<Rational> theta1(long num, long den = 1) {
    return {Rational(num) / Rational(den)};
}

static PolyExpr random_amplitude(Rng& rng, unsigned deg) {
    PolyExpr p(1, VarSpace::Amplitude);
    for (const auto& e : multis_up_to(3, int(deg))) {
        if (rng.uniform() < 0.45) continue;
        GaussianRational c(Rational(rng.uniform_int(-4, 4)),
                           Rational(rng.uniform_int(-2, 2)));
        if (c.is_zero()) continue;
        p.add_term(e, NetExpr::constant(c));
    }
    return p;
}

TEST_CASE("theta_symbol worked values") {
    SUBCASE("b0 of the amplitude y xi is x xi - i") {
        auto b = theta_symbol(A("y1*xi1"), theta1(0));
        CHECK(b.exact);
        CHECK(b.total().equals(S("x1*xi1 - i")));
    }
    SUBCASE("amplitudes independent of y reduce to themselves at theta 0") {
        auto b = theta_symbol(A("x1^2*xi1 + x1"), theta1(0));
        CHECK(b.total().equals(S("x1^2*xi1 + x1")));
    }
    SUBCASE("the constant amplitude gives 1 for every theta") {
        for (long t : {0L, 1L, 2L}) {
            auto b = theta_symbol(A("1"), theta1(t, 2));
            CHECK(b.total().equals(S("1")));
        }
    }
}

TEST_CASE("theta_symbol against the operator-action oracle") {
    // both quantizations applied to test functions u(y) = y^k e^{-y^2/2}
    Mollifier phi = make_mollifier(4, "plateau");
    const double eps = 1.0 / 64.0;
    auto b = theta_symbol(A("y1*xi1"), theta1(0));
    SymbolExpr b0 = b.total();
    for (int k = 0; k <= 3; ++k) {
        GridFunction u = GridFunction::from_fn(1, 10.0, 128, eps, [k](Span x) {
            return complexd(std::pow(x[0], k) * std::exp(-0.5 * x[0] * x[0]), 0.0);
        });
        GridFunction via_amp = dense_amplitude_apply(A("y1*xi1"), u, phi);
        GridFunction via_sym = apply_operator(b0, u, phi);
        double scale = std::max(via_amp.linf(), 1e-30);
        CAPTURE(k);
        CHECK(via_amp.linf_diff(via_sym) / scale < 1e-6);
    }
}

TEST_CASE("change_theta") {
    SUBCASE("theta2 == theta1 is the identity") {
        auto b = theta_symbol(A("x1^2*xi1^2 + y1*x1*xi1"), theta1(1, 2));
        auto b2 = change_theta(b, theta1(1, 2));
        CHECK(b2.total().equals(b.total()));
    }
    SUBCASE("x xi moves to theta = 1 as x xi + i, matching the direct theta-symbol") {
        auto b0 = theta_symbol(A("x1*xi1"), theta1(0));
        CHECK(b0.total().equals(S("x1*xi1")));
        auto b1 = change_theta(b0, theta1(1));
        auto direct = theta_symbol(A("x1*xi1"), theta1(1));
        CHECK(b1.total().equals(direct.total()));
        CHECK(b1.total().equals(S("x1*xi1 + i")));
        // operator oracle: Op(x xi) u = x D u; its 1-symbol applied the
        // 1-quantization way must reproduce the same action
        Mollifier phi = make_mollifier(4, "plateau");
        const double eps = 1.0 / 64.0;
        GridFunction u = gaussian_grid(10.0, 128, eps);
        GridFunction lhs = dense_amplitude_apply(A("x1*xi1"), u, phi);
        // b1((1-theta)x + theta y, xi) = b1(y, xi) as an amplitude
        GridFunction rhs = dense_amplitude_apply(A("y1*xi1 + i"), u, phi);
        CHECK(lhs.linf_diff(rhs) / std::max(lhs.linf(), 1e-30) < 1e-6);
    }
    SUBCASE("round trip 0 -> 1 -> 0 is exact on a polynomial symbol") {
        auto b0 = theta_symbol(A("x1*xi1^2 + x1^2*xi1"), theta1(0));
        auto b1 = change_theta(b0, theta1(1));
        auto back = change_theta(b1, theta1(0));
        CHECK(back.total().equals(b0.total()));
    }
    SUBCASE("consistency on randomized amplitudes of degree <= 4") {
        Rng rng(59);
        std::vector<std::vector<Rational>> thetas = {theta1(0), theta1(1, 2), theta1(1)};
        for (int t = 0; t < 12; ++t) {
            AmplitudeExpr a{random_amplitude(rng, 4)};
            if (a.is_zero()) continue;
            const auto& th1 = thetas[size_t(t) % 3];
            const auto& th2 = thetas[size_t(t + 1) % 3];
            auto via_change = change_theta(theta_symbol(a, th1), th2);
            auto direct = theta_symbol(a, th2);
            CHECK(via_change.total().equals(direct.total()));
            auto back = change_theta(via_change, th1);
            CHECK(back.total().equals(theta_symbol(a, th1).total()));
        }
    }
}

TEST_CASE("compose") {
    SUBCASE("xi after x gives x xi - i, the operator identity D(xu) = xDu - iu") {
        auto series = compose(S("xi1"), S("x1"));
        CHECK(series.exact);
        CHECK(series.total().equals(S("x1*xi1 - i")));
    }
    SUBCASE("identity operator composes trivially") {
        auto series = compose(S("1"), S("x1^2*xi1 + 3"));
        CHECK(series.total().equals(S("x1^2*xi1 + 3")));
        auto one = compose(S("1"), S("1"));
        CHECK(one.total().equals(S("1")));
    }
    SUBCASE("term orders follow m1 + m2 - 2 rho j") {
        SymbolExpr b1 = S("xi1^2");
        SymbolExpr b2 = S("x1^2");
        ClaimedClass c1{2, 1, 0, JB()};
        ClaimedClass c2{2, 1, 0, JB()};
        b1.claimed = c1;
        b2.claimed = c2;
        auto series = compose(b1, b2);
        REQUIRE(series.terms.size() == 3);
        for (size_t j = 0; j < series.terms.size(); ++j)
            CHECK(series.terms[j].order == doctest::Approx(4.0 - 2.0 * double(j)));
        // every term passes its claimed class
        SampleSpec sp;
        sp.box_L = 10;
        sp.n_samples = 250;
        sp.eps_j_hi = 8;
        for (size_t j = 0; j < series.terms.size(); ++j) {
            auto est = check_class(SymbolHandle(series.terms[j].sym), *JB(),
                                   series.terms[j].order, 1.0, 0, 2, sp);
            CHECK(est.verdict == Verdict::Member);
        }
    }
}

TEST_CASE("certify_hypoelliptic") {
    SUBCASE("x^2 + i xi^2 is elliptic for the bracket weight") {
        SymbolExpr a = S("x1^2 + i*xi1^2");
        a.claimed = ClaimedClass{2, 1, 0, JB()};
        auto cert = certify_hypoelliptic(a, JB(), 2.0, 1.0);
        CHECK(cert.verdict == HypoCertificate::Result::Elliptic);
        CHECK(cert.lower_constant > 0.1);
        CHECK(cert.N == 0);
    }
    SUBCASE("the quasi-elliptic xi^2 + i x^4 with its polyhedron weight") {
        auto qh = std::make_shared<WeightFunction>(WeightFunction::quasi_homogeneous(1, {4, 2}));
        SymbolExpr a = S("xi1^2 + i*x1^4");
        a.claimed = ClaimedClass{4, 1, 0, qh};
        auto cert = certify_hypoelliptic(a, qh, 4.0, 1.0);
        CHECK(cert.verdict == HypoCertificate::Result::Elliptic);
    }
    SUBCASE("xi fails along the x-axis") {
        SymbolExpr a = S("xi1");
        a.claimed = ClaimedClass{1, 1, 0, JB()};
        auto cert = certify_hypoelliptic(a, JB(), 1.0, 1.0);
        CHECK(cert.verdict == HypoCertificate::Result::Fail);
        REQUIRE(cert.witness.size() == 2);
        CHECK(std::abs(cert.witness[1]) < 1e-9);  // on the xi = 0 axis
    }
    SUBCASE("eps^2-scaled elliptic symbol reads N = 2 off the nets") {
        SymbolExpr a = S("eps^2*x1^2 + eps^2*i*xi1^2");
        a.claimed = ClaimedClass{2, 1, 0, JB()};
        CHECK(lower_bound_exponent(a) == 2);
        auto cert = certify_hypoelliptic(a, JB(), 2.0, 1.0);
        CHECK(cert.verdict == HypoCertificate::Result::Elliptic);
        CHECK(cert.N == 2);
    }
}

TEST_CASE("perturb_hypoelliptic") {
    SymbolExpr a = S("x1^2 + i*xi1^2");
    a.claimed = ClaimedClass{2, 1, 0, JB()};
    auto cert = certify_hypoelliptic(a, JB(), 2.0, 1.0);
    REQUIRE(cert.ok());

    SUBCASE("order-1 perturbation keeps the certificate, possibly with larger R") {
        SymbolExpr b = S("x1 + xi1");
        b.claimed = ClaimedClass{1, 1, 0, JB()};
        SymbolExpr pert = perturb_hypoelliptic(a, cert, b);
        bool ok = false;
        for (double R : {1.0, 2.0, 4.0, 8.0}) {
            auto c2 = certify_hypoelliptic(pert, JB(), 2.0, R);
            if (c2.ok()) {
                ok = true;
                break;
            }
        }
        CHECK(ok);
    }
    SUBCASE("zero perturbation returns a unchanged") {
        SymbolExpr z = SymbolExpr::zero(1, VarSpace::Symbol);
        CHECK(perturb_hypoelliptic(a, cert, z).equals(a));
    }
    SUBCASE("order >= l is rejected") {
        SymbolExpr b = S("x1^2");
        b.claimed = ClaimedClass{2, 1, 0, JB()};
        CHECK_THROWS_AS(perturb_hypoelliptic(a, cert, b), std::invalid_argument);
    }
    SUBCASE("quasi-elliptic perturbation through the anisotropic order") {
        auto qh = std::make_shared<WeightFunction>(WeightFunction::quasi_homogeneous(1, {4, 2}));
        SymbolExpr qa = S("xi1^2 + i*x1^4");
        qa.claimed = ClaimedClass{4, 1, 0, qh};
        auto qcert = certify_hypoelliptic(qa, qh, 4.0, 1.0);
        REQUIRE(qcert.ok());
        // |x^2| << Lambda^2: anisotropic order 2 < l = 4
        SymbolExpr b = S("eps^(-2)*x1^2");
        b.claimed = ClaimedClass{2, 1, 2, qh};
        SymbolExpr pert = perturb_hypoelliptic(qa, qcert, b);
        bool ok = false;
        for (double R : {1.0, 2.0, 4.0}) {
            if (certify_hypoelliptic(pert, qh, 4.0, R).ok()) {
                ok = true;
                break;
            }
        }
        CHECK(ok);
    }
}

TEST_CASE("parametrix") {
    SymbolExpr a = S("1 + x1^2 + xi1^2");
    a.claimed = ClaimedClass{2, 1, 0, JB()};
    auto cert = certify_hypoelliptic(a, JB(), 2.0, 1.0);
    REQUIRE(cert.verdict == HypoCertificate::Result::Elliptic);

    SUBCASE("p1 equals the hand recursion value -4 i x xi a^-3") {
        auto px = parametrix(a, cert, 1);
        REQUIRE(px.terms.size() == 2);
        PolyExpr base = parse_poly("1 + x1^2 + xi1^2", 1, VarSpace::Symbol);
        RationalExpr expect(parse_poly("-4*i*x1*xi1", 1, VarSpace::Symbol));
        for (int i = 0; i < 3; ++i) expect = expect * RationalExpr::reciprocal(base, {});
        expect.set_cutoff(1.0);
        REQUIRE(px.terms[1].parts().size() == 1);
        CHECK(px.terms[1].parts()[0].equals(expect));
    }
    SUBCASE("constant symbols invert exactly: p_k = 0 for k >= 1") {
        SymbolExpr c = S("2");
        c.claimed = ClaimedClass{0, 1, 0, JB()};
        auto ccert = certify_hypoelliptic(c, JB(), 0.0, 1.0);
        REQUIRE(ccert.ok());
        auto px = parametrix(c, ccert, 2);
        CHECK(px.terms[1].is_zero());
        CHECK(px.terms[2].is_zero());
        // residual = psi - 1: zero outside the annulus, -1 at the origin
        VecD far{20.0, 0.0}, in{0.1, 0.0};
        CHECK(std::abs(px.composed_residual.eval(far, 0.5)) < 1e-14);
        CHECK(std::abs(px.composed_residual.eval(in, 0.5) + 1.0) < 1e-14);
    }
    SUBCASE("order ladder and the inverse-symbol property") {
        auto px = parametrix(a, cert, 2);
        SampleSpec sp;
        sp.box_L = 12;
        sp.n_samples = 300;
        sp.eps_j_hi = 6;
        for (int k = 0; k <= 2; ++k) {
            auto est = check_class(SymbolHandle(px.terms[size_t(k)]), *JB(),
                                   -2.0 - 2.0 * k, 1.0, 0, 2, sp);
            CAPTURE(k);
            CHECK(est.verdict == Verdict::Member);
        }
        // (p0 d^gamma a) sits in S^{-|gamma|} with N = 0
        for (const auto& gamma : multis_of_order(2, 1)) {
            Multi g2(2, 0u);
            for (size_t i = 0; i < 2; ++i) g2[i] = gamma[i];
            SymbolExpr prod = px.terms[0] * a.differentiate_multi(g2, false);
            auto est = check_class(SymbolHandle(prod), *JB(), -1.0, 1.0, 0, 2, sp);
            CHECK(est.verdict == Verdict::Member);
        }
    }
    SUBCASE("residual order drops by 2 per K") {
        for (int K = 1; K <= 2; ++K) {
            auto px = parametrix(a, cert, K);
            auto fit = fitted_radial_order(
                [&](Span z, double eps) { return px.composed_residual.eval(z, eps); }, 2, 8.0,
                256.0, 9, 6, 0.5, 2);
            REQUIRE(fit.usable);
            CAPTURE(K);
            CHECK(fit.slope == doctest::Approx(-2.0 - 2.0 * K).epsilon(0.15));
        }
    }
    SUBCASE("right parametrix closes the mirrored residual ladder") {
        auto px = parametrix(a, cert, 2, ParametrixSide::Right);
        auto fit = fitted_radial_order(
            [&](Span z, double eps) { return px.composed_residual.eval(z, eps); }, 2, 8.0, 256.0,
            9, 6, 0.5, 3);
        REQUIRE(fit.usable);
        CHECK(fit.slope <= -6.0 + 0.3);
    }
    SUBCASE("parametrix requires a passing certificate and a polynomial symbol") {
        HypoCertificate bad;
        CHECK_THROWS_AS(parametrix(a, bad, 1), std::invalid_argument);
    }
}
