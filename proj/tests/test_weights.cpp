#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "psidocalc/mollifier.hpp"
#include "psidocalc/weights.hpp"

#include <cmath>

using namespace psido;

TEST_CASE("mollifier plateau profile") {
    Mollifier m = make_mollifier(4, "plateau");
    CHECK(m.fourier(0.0) == 1.0);
    CHECK(m.fourier(0.99) == 1.0);
    CHECK(m.fourier(3.0) == 0.0);
    CHECK(m.fourier(1.5) > 0.0);
    CHECK(m.fourier(1.5) < 1.0);
    CHECK_THROWS_AS(make_mollifier(2, "gauss"), std::invalid_argument);
}

TEST_CASE("mollifier: integral one, moments vanish on the reference quadrature") {
    Mollifier m = make_mollifier(4, "plateau");
    // int phi = phi_hat(0) = 1; moment(0) recomputes it by quadrature
    CHECK(m.moment(0) == doctest::Approx(1.0).epsilon(1e-8));
    for (int alpha = 1; alpha <= 4; ++alpha) {
        CAPTURE(alpha);
        CHECK(std::abs(m.moment(alpha)) <= 1e-8);
    }
}

TEST_CASE("mollifier convolution plateau: ||f*phi_eps - f||_inf decreases") {
    Mollifier m = make_mollifier(4, "plateau");
    // Fourier-side convolution of a Gaussian: fhat(xi) = sqrt(2pi) e^{-xi^2/2}
    auto conv_diff = [&](double eps) {
        double sup = 0.0;
        for (double x = -6.0; x <= 6.0; x += 0.23) {
            // (f*phi_eps)(x) - f(x) = (1/2pi) int e^{ix xi} fhat (phihat(eps xi)-1) dxi
            double acc_re = 0.0;
            double dxi = 0.002;
            for (double xi = -40.0; xi <= 40.0; xi += dxi) {
                double fhat = std::sqrt(2.0 * M_PI) * std::exp(-0.5 * xi * xi);
                acc_re += std::cos(x * xi) * fhat * (m.fourier(eps * std::abs(xi)) - 1.0) * dxi;
            }
            sup = std::max(sup, std::abs(acc_re / (2.0 * M_PI)));
        }
        return sup;
    };
    double prev = 1e300;
    for (int j = 2; j <= 8; ++j) {
        double d = conv_diff(std::ldexp(1.0, -j));
        CHECK(d <= prev + 1e-12);  // monotone within discretization error
        prev = d;
    }
    CHECK(prev < 1e-10);
}

TEST_CASE("cutoff psi endpoints") {
    CHECK(cutoff_psi(0.5) == 0.0);
    CHECK(cutoff_psi(1.0) == 0.0);
    CHECK(cutoff_psi(2.0) == 1.0);
    CHECK(cutoff_psi(1.5) > 0.0);
    CHECK(cutoff_psi_radius(5.0, 0.0) == 1.0);  // R = 0 disables the cutoff
}

TEST_CASE("weight evaluation") {
    SUBCASE("japanese bracket at z = 0") {
        auto w = WeightFunction::japanese_bracket(1);
        VecD z{0.0, 0.0};
        CHECK(w.eval(z) == doctest::Approx(1.0));
    }
    SUBCASE("quasi-homogeneous (2,1) at (1,1): the triangle example") {
        auto w = WeightFunction::quasi_homogeneous(1, {2, 1});
        VecD z{1.0, 1.0};
        CHECK(w.eval(z) == doctest::Approx(std::pow(3.0, 0.25)));
        CHECK(w.mu() == doctest::Approx(0.5));
    }
    SUBCASE("simplex polyhedron reproduces the bracket") {
        std::vector<std::vector<Rational>> verts = {
            {Rational(0), Rational(0)}, {Rational(1), Rational(0)}, {Rational(0), Rational(1)}};
        auto w = WeightFunction::polyhedron(1, verts, Rational(1));
        VecD z{3.0, 4.0};
        CHECK(w.eval(z) == doctest::Approx(std::sqrt(26.0)));
        auto jb = WeightFunction::japanese_bracket(1);
        Rng rng(3);
        for (int i = 0; i < 100; ++i) {
            VecD p{rng.uniform(-10, 10), rng.uniform(-10, 10)};
            CHECK(w.eval(p) == doctest::Approx(jb.eval(p)).epsilon(1e-12));
        }
    }
    SUBCASE("dimension mismatch throws") {
        auto w = WeightFunction::japanese_bracket(1);
        VecD z{1.0, 2.0, 3.0};
        CHECK_THROWS_AS(w.eval(z), std::invalid_argument);
    }
}

TEST_CASE("weight partials: analytic and bounded") {
    auto jb = WeightFunction::japanese_bracket(1);
    auto qh = WeightFunction::quasi_homogeneous(1, {4, 2});
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        VecD z{rng.uniform(-10, 10), rng.uniform(-10, 10)};
        for (int j = 0; j < 2; ++j) {
            // |d Lambda| << Lambda^0 pointwise
            CHECK(std::abs(jb.partial(j, z)) <= 1.001);
            CHECK(std::abs(qh.partial(j, z)) <= 3.0);
            // finite-difference cross-check
            double h = 1e-6 * (1.0 + std::abs(z[size_t(j)]));
            VecD zp = z, zm = z;
            zp[size_t(j)] += h;
            zm[size_t(j)] -= h;
            double fd = (jb.eval(zp) - jb.eval(zm)) / (2 * h);
            CHECK(jb.partial(j, z) == doctest::Approx(fd).epsilon(1e-5));
        }
    }
}

TEST_CASE("check_weight accepts the built-ins") {
    auto jb = WeightFunction::japanese_bracket(1);
    auto rep = check_weight(probe(jb), 10.0, 4000, jb.mu(), 1);
    CHECK(rep.pass());
    // Peetre: <z> <= sqrt(2) <zeta> <z - zeta>; the sharp constant is 2/sqrt(3)
    CHECK(rep.temperance_constant >= 1.0);
    CHECK(rep.temperance_constant <= 2.0 / std::sqrt(3.0) + 1e-6);

    auto qh = WeightFunction::quasi_homogeneous(1, {2, 1});
    auto rep2 = check_weight(probe(qh), 10.0, 4000, qh.mu(), 2);
    CHECK(rep2.pass());
}

TEST_CASE("check_weight rejects exp(|z|)") {
    WeightProbe bad{2, [](Span z) { return std::exp(norm2(z)); }};
    auto rep = check_weight(bad, 10.0, 2000, 1.0, 3);
    CHECK_FALSE(rep.pass_temperance);
    // the hand oracle: at zeta = 0, z = (L, 0) the ratio grows with L
    auto ratio = [](double l) { return std::exp(l) / (std::exp(0.0) * std::sqrt(1 + l * l)); };
    CHECK(ratio(10.0) > 10.0 * ratio(5.0));
    CHECK(ratio(20.0) > 10.0 * ratio(10.0));
}

TEST_CASE("built-ins sit between <z>^mu and <z>") {
    for (auto wf : {WeightFunction::japanese_bracket(1),
                    WeightFunction::quasi_homogeneous(1, {2, 1}),
                    WeightFunction::quasi_homogeneous(1, {4, 2})}) {
        Rng rng(11);
        double cl = 0, cu = 0, cl2 = 0, cu2 = 0;
        for (int i = 0; i < 3000; ++i) {
            double L = i < 1500 ? 10.0 : 20.0;  // constants stable under box doubling
            VecD z{rng.uniform(-L, L), rng.uniform(-L, L)};
            double br = std::sqrt(1 + z[0] * z[0] + z[1] * z[1]);
            double lam = wf.eval(z);
            double lower = std::pow(br, wf.mu()) / lam;  // <= C
            double upper = lam / br;
            if (i < 1500) {
                cl = std::max(cl, lower);
                cu = std::max(cu, upper);
            } else {
                cl2 = std::max(cl2, lower);
                cu2 = std::max(cu2, upper);
            }
        }
        CHECK(cl2 <= cl * 1.3 + 0.1);
        CHECK(cu2 <= cu * 1.3 + 0.1);
    }
}

TEST_CASE("weight_power_envelope formulas") {
    auto jb = WeightFunction::japanese_bracket(1);
    VecD z{2.0, 0.0}, zeta{0.0, 0.0};
    CHECK(weight_power_envelope(jb, 0.0, z, zeta) == 1.0);
    CHECK(weight_power_envelope(jb, 2.0, z, z) == doctest::Approx(jb.eval(z) * jb.eval(z)));
    // s = -1: (1 + Lambda(0)/<(2,0)>)^{-1} = (1 + 1/sqrt(5))^{-1}
    CHECK(weight_power_envelope(jb, -1.0, z, zeta) ==
          doctest::Approx(1.0 / (1.0 + 1.0 / std::sqrt(5.0))));
}

TEST_CASE("weight JSON round trip") {
    auto w = WeightFunction::from_json(R"({"kind":"quasi_homogeneous","M":[4,2]})");
    CHECK(w.kind() == WeightFunction::Kind::QuasiHomogeneous);
    VecD z{1.0, 1.0};
    CHECK(w.eval(z) == doctest::Approx(std::pow(3.0, 1.0 / 8.0)));
    auto w2 = WeightFunction::from_json(w.json_spec());
    CHECK(w2.eval(z) == doctest::Approx(w.eval(z)));
    CHECK_THROWS(WeightFunction::from_json(R"({"kind":"banana"})"));
    auto jb = WeightFunction::from_json("japanese", 1);
    CHECK(jb.kind() == WeightFunction::Kind::JapaneseBracket);
}

TEST_CASE("scaled simplex polyhedron is equivalent to a bracket power") {
    // vertices {0, (2,0), (0,2)} with formal order 2: comparable to <z>
    std::vector<std::vector<Rational>> verts = {
        {Rational(0), Rational(0)}, {Rational(2), Rational(0)}, {Rational(0), Rational(2)}};
    auto w = WeightFunction::polyhedron(1, verts, Rational(2));
    auto jb = WeightFunction::japanese_bracket(1);
    Rng rng(21);
    double lo = 1e300, hi = 0;
    for (int i = 0; i < 2000; ++i) {
        double L = i < 1000 ? 10.0 : 20.0;
        VecD z{rng.uniform(-L, L), rng.uniform(-L, L)};
        double r = w.eval(z) / jb.eval(z);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    CHECK(lo > 0.5);
    CHECK(hi < 2.0);
    CHECK(w.structure_ok());
}
