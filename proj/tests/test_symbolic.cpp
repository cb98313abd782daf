#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "psidocalc/expr_text.hpp"
#include "psidocalc/symbolic.hpp"

#include <cmath>

using namespace psido;

static PolyExpr P(const std::string& s, int n = 1) { return parse_poly(s, n, VarSpace::Symbol); }
static PolyExpr A3(const std::string& s, int n = 1) {
    return parse_poly(s, n, VarSpace::Amplitude);
}

static PolyExpr random_poly(Rng& rng, int n, unsigned deg, bool with_net = false) {
    PolyExpr p(n, VarSpace::Symbol);
    for (const auto& e : multis_up_to(2 * n, int(deg))) {
        if (rng.uniform() < 0.4) continue;
        GaussianRational c(Rational(rng.uniform_int(-6, 6)),
                           Rational(rng.uniform_int(-3, 3)) / Rational(2));
        if (c.is_zero()) continue;
        NetExpr net = NetExpr::constant(c);
        if (with_net && rng.uniform() < 0.3)
            net = net * NetExpr::eps_power(Rational(rng.uniform_int(-2, 2)));
        p.add_term(e, net);
    }
    return p;
}

TEST_CASE("poly arithmetic basics") {
    CHECK(P("x1*xi1") * P("x1*xi1") == P("x1^2*xi1^2"));
    CHECK(P("eps^(-1)*x1") + P("eps^(-1)*x1") == P("2*eps^(-1)*x1"));
    CHECK((P("x1+xi1") - P("x1+xi1")).is_zero());
    CHECK(P("(x1+xi1)^2") == P("x1^2 + 2*x1*xi1 + xi1^2"));
}

TEST_CASE("ring laws on randomized triples") {
    Rng rng(17);
    for (int t = 0; t < 30; ++t) {
        int n = 1 + (t % 2);
        PolyExpr a = random_poly(rng, n, 4, true);
        PolyExpr b = random_poly(rng, n, 4, true);
        PolyExpr c = random_poly(rng, n, 4, true);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a + b == b + a);
    }
}

TEST_CASE("differentiation") {
    CHECK(P("x1*xi1^2").differentiate(1) == P("2*x1*xi1"));
    // D = -i d
    CHECK(P("x1").differentiate(0, 1, true) == P("-i"));
    // commutation of mixed partials on randomized rational expressions
    Rng rng(23);
    for (int t = 0; t < 10; ++t) {
        PolyExpr num = random_poly(rng, 1, 3);
        RationalExpr r = RationalExpr(num) *
                         RationalExpr::reciprocal(P("1 + x1^2 + xi1^2"), {});
        RationalExpr dxdxi = r.differentiate(0).differentiate(1);
        RationalExpr dxidx = r.differentiate(1).differentiate(0);
        CHECK(dxdxi.equals(dxidx));
    }
}

TEST_CASE("derivative matches central differences at smooth points") {
    Rng rng(29);
    RationalExpr r = RationalExpr(P("x1^2*xi1 + 3*x1")) *
                     RationalExpr::reciprocal(P("1 + x1^2 + xi1^2"), {});
    for (int t = 0; t < 20; ++t) {
        VecD z{rng.uniform(-3, 3), rng.uniform(-3, 3)};
        double eps = 0.25;
        double h = 1e-5 * (1 + std::abs(z[0]));
        VecD zp = z, zm = z;
        zp[0] += h;
        zm[0] -= h;
        complexd fd = (r.eval(zp, eps) - r.eval(zm, eps)) / (2 * h);
        complexd ex = r.differentiate(0).eval(z, eps);
        CHECK(std::abs(fd - ex) <= 1e-6 * (1.0 + std::abs(ex)));
    }
}

TEST_CASE("reciprocal multiplies back to one") {
    PolyExpr a = P("1 + x1^2 + xi1^2");
    RationalExpr inv = RationalExpr::reciprocal(a, {});
    RationalExpr prod = RationalExpr(a) * inv;
    CHECK(prod.is_polynomial());
    CHECK(prod.num() == P("1"));
}

TEST_CASE("reciprocal with a scalar net factor") {
    PolyExpr a = P("eps^2*x1^2 + eps^2");  // eps^2 (x1^2 + 1)
    RationalExpr inv = RationalExpr::reciprocal(a, {});
    VecD z{3.0, 0.0};
    double eps = 0.5;
    complexd expect = 1.0 / (0.25 * (9.0 + 1.0));
    CHECK(std::abs(inv.eval(z, eps) - expect) < 1e-12);
    CHECK_THROWS_AS(RationalExpr::reciprocal(P("x1 + eps*xi1"), {}), std::domain_error);
}

TEST_CASE("quotient rule keeps factored denominators") {
    PolyExpr a = P("1 + x1^2 + xi1^2");
    RationalExpr inv = RationalExpr::reciprocal(a, {});
    RationalExpr d = inv.differentiate(1);  // -2 xi / a^2
    CHECK(d.den().size() == 1);
    CHECK(d.den().begin()->second == 2);
    RationalExpr expect = RationalExpr(P("-2*xi1")) *
                          RationalExpr::reciprocal(a, {}) * RationalExpr::reciprocal(a, {});
    CHECK(d.equals(expect));
}

TEST_CASE("eval_at examples") {
    SUBCASE("polynomial value") {
        VecD z{1.0, 1.0};
        CHECK(std::abs(P("1 + x1^2 + xi1^2").eval(z, 0.7) - 3.0) < 1e-15);
    }
    SUBCASE("eps scaling: eps^-2 x xi at (2,3), eps = 1/4") {
        VecD z{2.0, 3.0};
        CHECK(std::abs(P("eps^(-2)*x1*xi1").eval(z, 0.25) - 96.0) < 1e-12);
    }
    SUBCASE("cutoff p0 outside the annulus and inside the ball") {
        RationalExpr p0 = RationalExpr::reciprocal(P("1 + x1^2 + xi1^2"), 1.0);
        VecD far{10.0, 0.0};
        CHECK(std::abs(p0.eval(far, 0.5) - 1.0 / 101.0) < 1e-15);
        VecD in{0.5, 0.0};
        CHECK(p0.eval(in, 0.5) == complexd(0.0));
    }
}

TEST_CASE("affine substitution") {
    // a(x,y,xi) = y xi, restriction y := x
    PolyExpr a = A3("y1*xi1");
    std::vector<PolyExpr> images;
    images.push_back(PolyExpr::variable(1, VarSpace::Symbol, 0));  // x -> x
    images.push_back(PolyExpr::variable(1, VarSpace::Symbol, 0));  // y -> x
    images.push_back(PolyExpr::variable(1, VarSpace::Symbol, 1));  // xi -> xi
    CHECK(a.substitute(images) == P("x1*xi1"));

    // y := x - (1-theta) y with theta = 1 leaves x
    PolyExpr b = A3("y1");
    std::vector<PolyExpr> im2;
    im2.push_back(PolyExpr::variable(1, VarSpace::Amplitude, 0));
    im2.push_back(PolyExpr::variable(1, VarSpace::Amplitude, 0));  // y -> x - 0*y = x
    im2.push_back(PolyExpr::variable(1, VarSpace::Amplitude, 2));
    CHECK(b.substitute(im2) == A3("x1"));

    // y := x + y then y := 0 turns y^2 into x^2
    PolyExpr c = A3("y1^2");
    std::vector<PolyExpr> im3;
    im3.push_back(PolyExpr::variable(1, VarSpace::Amplitude, 0));
    im3.push_back(PolyExpr::variable(1, VarSpace::Amplitude, 0) +
                  PolyExpr::variable(1, VarSpace::Amplitude, 1));
    im3.push_back(PolyExpr::variable(1, VarSpace::Amplitude, 2));
    PolyExpr shifted = c.substitute(im3);
    std::vector<PolyExpr> im4;
    im4.push_back(PolyExpr::variable(1, VarSpace::Amplitude, 0));
    im4.push_back(PolyExpr(1, VarSpace::Amplitude));  // y -> 0
    im4.push_back(PolyExpr::variable(1, VarSpace::Amplitude, 2));
    CHECK(shifted.substitute(im4) == A3("x1^2"));
}

TEST_CASE("exact division") {
    PolyExpr a = P("1 + x1^2 + xi1^2");
    PolyExpr prod = a * P("x1*xi1 + 2");
    auto q = prod.divide_exact(a);
    REQUIRE(q.has_value());
    CHECK(*q == P("x1*xi1 + 2"));
    CHECK_FALSE(P("x1^2 + 1").divide_exact(P("xi1 + 1")).has_value());
}

TEST_CASE("symbol parts keep distinct cutoffs separate") {
    SymbolExpr s(RationalExpr::reciprocal(P("1 + x1^2 + xi1^2"), 1.0));
    SymbolExpr t = s - SymbolExpr::one(1, VarSpace::Symbol);
    CHECK(t.parts().size() == 2);
    VecD far{10.0, 0.0};
    CHECK(std::abs(t.eval(far, 0.5) - (1.0 / 101.0 - 1.0)) < 1e-15);
    VecD in{0.1, 0.0};
    CHECK(std::abs(t.eval(in, 0.5) - (-1.0)) < 1e-15);
}

TEST_CASE("expression grammar") {
    CHECK(P("xi1^2 + (1+2i)*x1^2").eval(VecD{1.0, 2.0}, 1.0) == complexd(5.0, 2.0));
    CHECK_THROWS_AS(P("xi3"), ParseError);
    CHECK_THROWS_AS(P("y1"), ParseError);  // y needs amplitude space
    CHECK_THROWS_AS(P("x1 +"), ParseError);
    CHECK_THROWS_AS(P("x1^(1/2)"), ParseError);
    CHECK(A3("x1*y1*xi1").total_degree() == 3);
    // printer round trip
    PolyExpr p = P("(1/2+3i)*x1^2*xi1 + eps^(-3)*x1 + negl^2");
    CHECK(parse_poly(p.str(), 1, VarSpace::Symbol) == p);
}
