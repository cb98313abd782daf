#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "psidocalc/expr_text.hpp"
#include "psidocalc/symbol_classes.hpp"

#include <cmath>

using namespace psido;

static SymbolExpr S(const std::string& s, int n = 1) {
    return SymbolExpr(parse_poly(s, n, VarSpace::Symbol));
}
static WeightPtr JB(int n = 1) {
    return std::make_shared<WeightFunction>(WeightFunction::japanese_bracket(n));
}

static SampleSpec quick_spec() {
    SampleSpec s;
    s.box_L = 10;
    s.n_samples = 250;
    s.eps_j_hi = 10;
    return s;
}

TEST_CASE("check_class accepts polynomials with moderate coefficients") {
    auto w = JB();
    Rng rng(41);
    for (int t = 0; t < 6; ++t) {
        PolyExpr p(1, VarSpace::Symbol);
        int N = 0;
        for (const auto& e : multis_up_to(2, 3)) {
            if (rng.uniform() < 0.5) continue;
            int pw = rng.uniform_int(0, 2);
            N = std::max(N, pw);
            p.add_term(e, NetExpr::term(GaussianRational(rng.uniform_int(1, 5)),
                                        Rational(-pw), 0));
        }
        if (p.is_zero()) continue;
        double m = p.total_degree();  // k / mu with mu = 1
        auto est = check_class(SymbolHandle(SymbolExpr(p)), *w, m, 1.0, N, 3, quick_spec());
        CAPTURE(p.str());
        CHECK(est.verdict == Verdict::Member);
    }
}

TEST_CASE("check_class: the constant symbol has constants <= 1") {
    auto est = check_class(SymbolHandle(S("1")), *JB(), 0, 1.0, 0, 3, quick_spec());
    CHECK(est.verdict == Verdict::Member);
    for (const auto& [al, c] : est.constants) CHECK(c <= 1.0 + 1e-12);
}

TEST_CASE("check_class rejects an untamed eps power") {
    // closed-form oracle: sup at z=(0,1) grows exactly like eps^-1
    auto est = check_class(SymbolHandle(S("eps^(-1)*xi1")), *JB(), 1, 1.0, 0, 2, quick_spec());
    CHECK(est.verdict == Verdict::NotMember);
    Multi zero{0, 0};
    CHECK(est.eps_slope[zero] == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("check_class rejects a wrong order and accepts relaxed parameters") {
    auto w = JB();
    auto bad = check_class(SymbolHandle(S("xi1^2")), *w, 1, 1.0, 0, 2, quick_spec());
    CHECK(bad.verdict == Verdict::NotMember);
    // inclusion monotonicity: member at (2,1,0) stays member at (3, 1/2, 1)
    auto est1 = check_class(SymbolHandle(S("xi1^2")), *w, 2, 1.0, 0, 3, quick_spec());
    auto est2 = check_class(SymbolHandle(S("xi1^2")), *w, 3, 0.5, 1, 3, quick_spec());
    CHECK(est1.verdict == Verdict::Member);
    CHECK(est2.verdict == Verdict::Member);
}

TEST_CASE("calculus closure: products and derivatives of members") {
    auto w = JB();
    SymbolExpr a = S("x1^2 + i*xi1^2");   // (2, 1, 0)
    SymbolExpr b = S("eps^(-1)*x1*xi1");  // (2, 1, 1)
    auto prod = check_class(SymbolHandle(a * b), *w, 4, 1.0, 1, 3, quick_spec());
    CHECK(prod.verdict == Verdict::Member);
    Multi dxi{0, 1};
    auto der = check_class(SymbolHandle(a.differentiate_multi(dxi)), *w, 1, 1.0, 0, 3,
                           quick_spec());
    CHECK(der.verdict == Verdict::Member);
}

TEST_CASE("check_negligible") {
    auto w = JB();
    SUBCASE("coefficient shortcut") {
        auto est = check_negligible(SymbolHandle(SymbolExpr(
                                        parse_poly("negl*x1^2*xi1", 1, VarSpace::Symbol))),
                                    *w, 3, 1.0, 10, quick_spec());
        CHECK(est.verdict == Verdict::Member);
        CHECK(est.exact_shortcut);
    }
    SUBCASE("zero symbol") {
        auto est = check_negligible(SymbolHandle(SymbolExpr::zero(1, VarSpace::Symbol)), *w, 0,
                                    1.0, 10, quick_spec());
        CHECK(est.verdict == Verdict::Member);
    }
    SUBCASE("eps^50 x fails at q = 51") {
        SampleSpec sp = quick_spec();
        sp.eps_j_hi = 16;
        auto est = check_negligible(SymbolHandle(S("eps^50*x1")), *w, 1, 1.0, 51, sp);
        CHECK(est.verdict == Verdict::NotMember);
        // and passes when only q <= 10 is demanded (beyond that is
        // numerically unverifiable by design)
        auto est10 = check_negligible(SymbolHandle(S("eps^50*x1")), *w, 1, 1.0, 10, sp);
        CHECK(est10.verdict == Verdict::Member);
    }
    SUBCASE("shortcut consistency with sampling") {
        SymbolExpr a(parse_poly("negl*xi1^2", 1, VarSpace::Symbol));
        auto with_shortcut = check_negligible(SymbolHandle(a), *w, 2, 1.0, 10, quick_spec());
        // black-box route samples the same symbol without the shortcut
        CompiledSymbol none(a, 1.0);
        SymbolHandle bb(1, VarSpace::Symbol,
                        [a](Span z, double eps) { return a.eval(z, eps); });
        auto sampled = check_negligible(bb, *w, 2, 1.0, 10, quick_spec());
        CHECK(with_shortcut.verdict == Verdict::Member);
        CHECK(sampled.verdict == Verdict::Member);
    }
}

TEST_CASE("check_smoothing") {
    SUBCASE("rapidly decreasing rational symbol") {
        PolyExpr base = parse_poly("1 + x1^2 + xi1^2", 1, VarSpace::Symbol);
        RationalExpr r = RationalExpr::reciprocal(base, {});
        RationalExpr p = r;
        for (int i = 1; i < 20; ++i) p = p * r;
        SampleSpec sp = quick_spec();
        sp.box_L = 20;
        auto est = check_smoothing(SymbolHandle(SymbolExpr(p)), sp, 4, 0);
        CHECK(est.verdict == Verdict::Member);
    }
    SUBCASE("xi is not smoothing") {
        auto est = check_smoothing(SymbolHandle(S("xi1")), quick_spec(), 2, 0);
        CHECK(est.verdict == Verdict::NotMember);
    }
    SUBCASE("negligible coefficients shortcut") {
        auto est = check_smoothing(SymbolHandle(SymbolExpr(
                                       parse_poly("negl*xi1^10", 1, VarSpace::Symbol))),
                                   quick_spec(), 2);
        CHECK(est.verdict == Verdict::Member);
        CHECK(est.exact_shortcut);
    }
}

TEST_CASE("check_amplitude") {
    auto w = JB();
    SUBCASE("slice of a symbol is an amplitude with the same order") {
        // b(x,y,xi) = a((x+y)/2, xi) for a = 1 + x^2 + xi^2
        PolyExpr b(1, VarSpace::Amplitude);
        PolyExpr half_sum = parse_poly("(1/2)*x1 + (1/2)*y1", 1, VarSpace::Amplitude);
        PolyExpr xi = parse_poly("xi1", 1, VarSpace::Amplitude);
        PolyExpr bb = PolyExpr::constant(1, VarSpace::Amplitude, NetExpr::one()) +
                      half_sum * half_sum + xi * xi;
        SampleSpec sp = quick_spec();
        sp.n_samples = 300;
        auto est = check_amplitude(SymbolHandle(SymbolExpr(bb)), *w, 2, {}, 1.0, 0, 2, sp);
        CHECK(est.verdict == Verdict::Member);
    }
    SUBCASE("constant amplitude") {
        auto est = check_amplitude(SymbolHandle(SymbolExpr(
                                       parse_poly("1", 1, VarSpace::Amplitude))),
                                   *w, 0, 0.0, 1.0, 0, 2, quick_spec());
        CHECK(est.verdict == Verdict::Member);
    }
    SUBCASE("y xi needs m = 2, m' = 1") {
        PolyExpr a = parse_poly("y1*xi1", 1, VarSpace::Amplitude);
        auto est = check_amplitude(SymbolHandle(SymbolExpr(a)), *w, 2, {}, 1.0, 0, 2,
                                   quick_spec());
        CHECK(est.verdict == Verdict::Member);
        REQUIRE(est.mprime.has_value());
        CHECK(*est.mprime == doctest::Approx(1.0));
    }
}

TEST_CASE("asymptotic sums") {
    auto w = JB();
    SampleSpec sp = quick_spec();

    SUBCASE("single term saturates beyond the cutoff") {
        AsymptoticSeries s;
        s.m = 2;
        s.rho = 1;
        s.N = 0;
        AsymptoticSeries::Term t;
        t.sym = S("xi1^2");
        t.order = 2;
        s.terms.push_back(t);
        auto sum = asymptotic_sum(s, w, sp);
        REQUIRE(sum.lambda.size() == 1);
        double need = 2.0 / sum.lambda[0];
        VecD z{need + 5.0, need + 5.0};
        complexd direct = S("xi1^2").eval(z, 0.5);
        CHECK(std::abs(sum.eval(z, 0.5) - direct) < 1e-12 * std::abs(direct));
    }

    SUBCASE("partial-sum residual drops through the order ladder") {
        // a_j of order -2j: 4^{-j} / (1 + x^2 + xi^2)^j; the small scale
        // factors keep the lambda schedule near 2^{-j}, so the cutoffs
        // saturate well inside the fitted radii
        PolyExpr base = parse_poly("1 + x1^2 + xi1^2", 1, VarSpace::Symbol);
        AsymptoticSeries s;
        s.m = 0;
        s.rho = 1;
        s.N = 0;
        for (int j = 0; j <= 3; ++j) {
            AsymptoticSeries::Term t;
            RationalExpr r(PolyExpr::constant(
                1, VarSpace::Symbol,
                NetExpr::constant(GaussianRational(Rational(1) / Rational(1 << (4 * j))))));
            for (int i = 0; i < j; ++i) r = r * RationalExpr::reciprocal(base, {});
            t.sym = SymbolExpr(r);
            t.order = -2.0 * j;
            s.terms.push_back(t);
        }
        auto sum = asymptotic_sum(s, w, sp);
        for (int r = 1; r <= 3; ++r) {
            // residual of the truncation at r, fitted along rays beyond every
            // cutoff annulus, where the sum saturates to the plain series;
            // the range stays short so the residual clears the cancellation
            // floor of the subtraction
            double start = 8.0;
            for (double lam : sum.lambda) start = std::max(start, 2.2 / lam);
            auto resid = [&](Span z, double eps) {
                complexd v = sum.eval(z, eps);
                for (int j = 0; j < r; ++j) v -= s.terms[size_t(j)].sym.eval(z, eps);
                return v;
            };
            auto fit = fitted_radial_order(resid, 2, start, 4.0 * start, 7, 6, 0.5, 1);
            REQUIRE(fit.usable);
            CHECK(fit.slope <= -2.0 * r + 0.3);
        }
    }

    SUBCASE("two lambda schedules differ by a smoothing symbol") {
        AsymptoticSeries s;
        s.m = 1;
        s.rho = 1;
        s.N = 0;
        PolyExpr base = parse_poly("1 + x1^2 + xi1^2", 1, VarSpace::Symbol);
        for (int j = 0; j <= 1; ++j) {
            AsymptoticSeries::Term t;
            if (j == 0) t.sym = S("xi1");
            else t.sym = SymbolExpr(RationalExpr(parse_poly("x1", 1, VarSpace::Symbol)) *
                                    RationalExpr::reciprocal(base, {}));
            t.order = 1.0 - 2.0 * j;
            s.terms.push_back(t);
        }
        auto sum1 = asymptotic_sum(s, w, sp);
        auto sum2 = asymptotic_sum(s, w, sp, 0.5);
        auto diff = [&](Span z, double eps) { return sum1.eval(z, eps) - sum2.eval(z, eps); };
        // the schedules disagree on a union of annuli inside Lambda <= 4/lambda_1';
        // the box just covers it and the samples resolve the glue shells
        SampleSpec supp = sp;
        supp.box_L = 12;
        supp.n_samples = 5000;
        supp.eps_j_hi = 4;
        auto est = check_smoothing(SymbolHandle(1, VarSpace::Symbol, diff, 1e-4), supp, 2, 0);
        CHECK(est.verdict == Verdict::Member);
    }
}

TEST_CASE("a symbol with a sin coefficient fails every tested order") {
    auto w = JB();
    SymbolHandle bb(1, VarSpace::Symbol,
                    [](Span z, double) { return complexd(std::sin(z[0]) * z[1], 0.0); }, 0.05);
    SampleSpec sp = quick_spec();
    sp.n_samples = 150;
    sp.eps_j_hi = 4;
    for (int m = 0; m <= 3; ++m) {
        auto est = check_class(bb, *w, double(m), 1.0, 0, std::max(3, m + 1), sp);
        CAPTURE(m);
        CHECK(est.verdict != Verdict::Member);
    }
}
