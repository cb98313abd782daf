#include "psidocalc/mollifier.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace psido {

static double glue(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

double smoothstep(double t, double a, double b) {
    if (t <= a) return 0.0;
    if (t >= b) return 1.0;
    double s = (t - a) / (b - a);
    double g1 = glue(s), g2 = glue(1.0 - s);
    return g1 / (g1 + g2);
}

// 16-point Gauss-Legendre nodes/weights on [-1,1]
static const double kGlNodes[16] = {
    -0.9894009349916499, -0.9445750230732326, -0.8656312023878318, -0.7554044083550030,
    -0.6178762444026438, -0.4580167776572274, -0.2816035507792589, -0.0950125098376374,
    0.0950125098376374,  0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
    0.7554044083550030,  0.8656312023878318,  0.9445750230732326,  0.9894009349916499};
static const double kGlWeights[16] = {
    0.0271524594117541, 0.0622535239386479, 0.0951585116824928, 0.1246289712555339,
    0.1495959888165767, 0.1691565193950025, 0.1826034150449236, 0.1894506104550685,
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

// composite 16-point GL over [a,b] with `panels` panels
template <typename F>
static double gl_integrate(const F& f, double a, double b, int panels) {
    double sum = 0.0;
    double w = (b - a) / double(panels);
    for (int p = 0; p < panels; ++p) {
        double lo = a + w * double(p);
        double mid = lo + 0.5 * w, half = 0.5 * w;
        double s = 0.0;
        for (int k = 0; k < 16; ++k) s += kGlWeights[k] * f(mid + half * kGlNodes[k]);
        sum += s * half;
    }
    return sum;
}

double Mollifier::spatial(double x) const {
    // phi(x) = (1/pi) * int_0^outer cos(x r) phi_hat(r) dr   (phi_hat even)
    double ax = std::abs(x);
    int panels = std::max(8, int(std::ceil(ax * outer / 4.0)) + 8);
    auto f = [&](double r) { return std::cos(ax * r) * fourier(r); };
    return gl_integrate(f, 0.0, outer, panels) / M_PI;
}

// truncated Taylor arithmetic for exact profile derivatives (order <= 8)
namespace {

constexpr int kJetOrder = 8;

struct Jet {
    double c[kJetOrder + 1] = {0};
    static Jet var(double x) {
        Jet j;
        j.c[0] = x;
        j.c[1] = 1.0;
        return j;
    }
    static Jet cons(double x) {
        Jet j;
        j.c[0] = x;
        return j;
    }
};

Jet operator+(const Jet& a, const Jet& b) {
    Jet r;
    for (int i = 0; i <= kJetOrder; ++i) r.c[i] = a.c[i] + b.c[i];
    return r;
}
Jet operator-(const Jet& a, const Jet& b) {
    Jet r;
    for (int i = 0; i <= kJetOrder; ++i) r.c[i] = a.c[i] - b.c[i];
    return r;
}
Jet operator/(const Jet& a, const Jet& b) {
    Jet r;
    r.c[0] = a.c[0] / b.c[0];
    for (int k = 1; k <= kJetOrder; ++k) {
        double s = a.c[k];
        for (int i = 0; i < k; ++i) s -= r.c[i] * b.c[k - i];
        r.c[k] = s / b.c[0];
    }
    return r;
}
Jet jexp(const Jet& a) {
    Jet r;
    r.c[0] = std::exp(a.c[0]);
    for (int k = 1; k <= kJetOrder; ++k) {
        double s = 0;
        for (int i = 1; i <= k; ++i) s += double(i) * a.c[i] * r.c[k - i];
        r.c[k] = s / double(k);
    }
    return r;
}
// g(s) = exp(-1/s), valid for s0 > 0
Jet jglue(const Jet& s) { return jexp(Jet::cons(0.0) - Jet::cons(1.0) / s); }

}  // namespace

double Mollifier::moment(int alpha) const {
    if (alpha == 0) {
        // direct quadrature; the tail of phi is symmetric and small by 400
        double X = std::min(moment_box, 400.0);
        auto f = [&](double x) { return spatial(x); };
        return 2.0 * gl_integrate(f, 0.0, X, int(std::ceil(X)));
    }
    if (alpha % 2 == 1) return 0.0;  // parity: the profile is radial
    if (alpha > kJetOrder)
        throw std::invalid_argument("mollifier: moment order capped at 8 on this quadrature");

    // int_{-X}^{X} x^a phi dx = (i)^a (1/2pi) int phi_hat(|r|) d_r^a [2 sin(Xr)/r] dr;
    // moving the derivatives onto the glue (supported on [inner,outer]) kills
    // the x^a roundoff amplification entirely
    double X = moment_box;
    double wdt = outer - inner;
    auto deriv_profile = [&](double r) {
        Jet rr = Jet::var(r);
        Jet s1 = (rr - Jet::cons(inner)) / Jet::cons(wdt);       // glue argument
        Jet s2 = (Jet::cons(outer) - rr) / Jet::cons(wdt);
        Jet g1 = jglue(s1), g2 = jglue(s2);
        Jet prof = g2 / (g1 + g2);  // = phi_hat on the annulus
        double fact = 1.0;
        for (int i = 2; i <= alpha; ++i) fact *= double(i);
        return prof.c[alpha] * fact;
    };
    auto f = [&](double r) { return deriv_profile(r) * std::sin(X * r) / r; };
    int panels = std::max(64, int(std::ceil(X * wdt / 3.0)));
    double integral = gl_integrate(f, inner, outer, panels);
    double sign = (alpha / 2) % 2 == 0 ? 1.0 : -1.0;  // (i)^alpha, alpha even
    return sign * 2.0 * integral / M_PI;
}

Mollifier make_mollifier(int q, const std::string& profile) {
    if (profile != "plateau")
        throw std::invalid_argument("make_mollifier: unknown profile '" + profile + "'");
    if (q < 0) throw std::invalid_argument("make_mollifier: q must be >= 0");
    Mollifier m;
    m.moment_order = q;
    return m;
}

Mollifier make_plateau(double inner, double outer, int q) {
    if (!(0 < inner && inner < outer))
        throw std::invalid_argument("make_plateau: need 0 < inner < outer");
    Mollifier m;
    m.moment_order = q;
    m.inner = inner;
    m.outer = outer;
    return m;
}

}  // namespace psido
