#include "psidocalc/oscint.hpp"

#include "psidocalc/mollifier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace psido {

double PhaseFunction::eval(Span x) const {
    double s = 0;
    for (const auto& [c, e] : terms) {
        double m = c;
        for (size_t i = 0; i < e.size(); ++i)
            for (unsigned q = 0; q < e[i]; ++q) m *= x[i];
        s += m;
    }
    return s;
}

VecD PhaseFunction::grad(Span x) const {
    VecD g(size_t(p), 0.0);
    for (const auto& [c, e] : terms) {
        for (size_t v = 0; v < e.size(); ++v) {
            if (e[v] == 0) continue;
            double m = c * double(e[v]);
            for (size_t i = 0; i < e.size(); ++i) {
                unsigned pw = e[i] - (i == v ? 1u : 0u);
                for (unsigned q = 0; q < pw; ++q) m *= x[i];
            }
            g[v] += m;
        }
    }
    return g;
}

void PhaseFunction::validate(uint64_t seed) const {
    Rng rng(seed);
    std::vector<VecD> probes;
    for (int d = 0; d < p; ++d) {  // axis points catch degenerate directions
        for (double s : {1.0, -1.0}) {
            VecD e(size_t(p), 0.0);
            e[size_t(d)] = s;
            probes.push_back(e);
        }
    }
    for (int s = 0; s < 200; ++s) {
        VecD x(size_t(p), 0.0);
        double r2 = 0;
        for (auto& v : x) {
            v = rng.uniform(-1.0, 1.0);
            r2 += v * v;
        }
        if (r2 < 1e-4) continue;
        double r = std::sqrt(r2);
        for (auto& v : x) v /= r;
        probes.push_back(x);
    }
    for (const auto& x : probes) {
        // homogeneity of order k
        double t = 0.5 + 2.0 * rng.uniform();
        VecD tx(x.size());
        for (size_t i = 0; i < x.size(); ++i) tx[i] = t * x[i];
        double lhs = eval(tx), rhs = std::pow(t, double(k)) * eval(x);
        if (std::abs(lhs - rhs) > 1e-9 * (1.0 + std::abs(rhs)))
            throw std::invalid_argument("phase: not positively homogeneous of the stated order");
        VecD g = grad(x);
        if (norm2(g) < 1e-12)
            throw std::invalid_argument("phase: gradient vanishes on the unit sphere");
    }
}

PhaseFunction PhaseFunction::product(double c) {
    PhaseFunction w;
    w.p = 2;
    w.k = 2;
    w.terms = {{c, Monomial{1, 1}}};
    return w;
}

namespace {

constexpr double kProbeFloor = 1e-15;

struct AmpProfile {
    double scale = 0.0;
    std::vector<double> decay_radius;  // per axis; infinity when not decaying
    std::vector<bool> flat;            // |A| independent of the axis
};

AmpProfile probe_amplitude(const AmplitudeFn& a, int p, double eps) {
    AmpProfile prof;
    prof.decay_radius.assign(size_t(p), std::numeric_limits<double>::infinity());
    prof.flat.assign(size_t(p), true);
    // reference scale near the origin
    VecD x(size_t(p), 0.0);
    for (double t : {0.0, 0.3, -0.5, 0.9}) {
        for (int i = 0; i < p; ++i) x[size_t(i)] = t;
        prof.scale = std::max(prof.scale, std::abs(a(x, eps)));
    }
    if (prof.scale == 0.0) prof.scale = 1.0;

    for (int axis = 0; axis < p; ++axis) {
        double reach = std::numeric_limits<double>::infinity();
        bool flat = true;
        for (double off : {0.0, 0.7}) {
            VecD base(size_t(p), off);
            base[size_t(axis)] = 0.0;
            complexd at0 = a(base, eps);
            for (double X = 1.0; X <= 512.0; X *= 2.0) {
                double worst = 0.0;
                for (double f : {1.0, 1.37, 1.93}) {
                    for (double s : {1.0, -1.0}) {
                        VecD pt = base;
                        pt[size_t(axis)] = s * f * X;
                        complexd v = a(pt, eps);
                        worst = std::max(worst, std::abs(v));
                        if (std::abs(v - at0) > 1e-10 * (prof.scale + std::abs(at0)))
                            flat = false;
                    }
                }
                if (worst <= kProbeFloor * prof.scale) {
                    reach = std::min(reach, 2.0 * X);
                    break;
                }
            }
        }
        prof.decay_radius[size_t(axis)] = reach;
        prof.flat[size_t(axis)] = flat;
    }
    return prof;
}

enum class DamperKind { GaussPsi, PlateauPhi };

struct Damper {
    DamperKind kind;
    double param;  // h for psi, 2^j for phi
    double reach() const {
        return kind == DamperKind::GaussPsi ? 9.0 / param : 2.0 * param;
    }
    double eval_radial(double r) const {
        if (kind == DamperKind::GaussPsi) return std::exp(-0.5 * param * param * r * r);
        return 1.0 - smoothstep(r / param, 1.0, 2.0);
    }
    double eval(Span x) const { return eval_radial(norm2(x)); }
};

// tensor-product trapezoid over the effective box
complexd tensor_pass(const AmplitudeFn& a, const PhaseFunction& omega, double eps,
                     const Damper& dmp, const AmpProfile& prof, const OscSchedule& sched,
                     bool& budget_limited) {
    int p = omega.p;
    VecD box(size_t(p), 0.0);
    for (int i = 0; i < p; ++i)
        box[size_t(i)] = std::min(prof.decay_radius[size_t(i)], dmp.reach());

    // frequency bound per axis from the gradient at box corners
    VecD freq(size_t(p), 0.0);
    int corners = 1 << p;
    for (int c = 0; c < corners; ++c) {
        VecD pt(size_t(p), 0.0);
        for (int i = 0; i < p; ++i) pt[size_t(i)] = (c >> i & 1) ? box[size_t(i)] : -box[size_t(i)];
        VecD g = omega.grad(pt);
        for (int i = 0; i < p; ++i) freq[size_t(i)] = std::max(freq[size_t(i)], std::abs(g[size_t(i)]));
    }

    std::vector<int> npts(size_t(p), 0);
    double total = 1.0;
    for (int i = 0; i < p; ++i) {
        double delta = std::min(0.25, M_PI / (4.0 * freq[size_t(i)] + 1.0));
        npts[size_t(i)] = std::max(32, int(std::ceil(2.0 * box[size_t(i)] / delta)) + 1);
        total *= double(npts[size_t(i)]);
    }
    if (total > sched.node_budget) {
        budget_limited = true;
        double shrink = std::pow(sched.node_budget / total, 1.0 / double(p));
        for (int i = 0; i < p; ++i)
            npts[size_t(i)] = std::max(32, int(double(npts[size_t(i)]) * shrink));
    }

    // row-parallel trapezoid; p <= 2
    if (p == 1) {
        double h = 2.0 * box[0] / double(npts[0] - 1);
        complexd acc = 0.0;
        for (int i = 0; i < npts[0]; ++i) {
            double x = -box[0] + h * double(i);
            double w = (i == 0 || i == npts[0] - 1) ? 0.5 : 1.0;
            acc += w * a(Span(&x, 1), eps) * dmp.eval(Span(&x, 1)) *
                   std::polar(1.0, omega.eval(Span(&x, 1)));
        }
        return acc * h;
    }

    double h0 = 2.0 * box[0] / double(npts[0] - 1);
    double h1 = 2.0 * box[1] / double(npts[1] - 1);
    std::vector<complexd> rows(size_t(npts[0]), complexd(0.0));
    parallel_for(npts[0], [&](int i) {
        double x0 = -box[0] + h0 * double(i);
        double w0 = (i == 0 || i == npts[0] - 1) ? 0.5 : 1.0;
        complexd acc = 0.0;
        double pt[2];
        pt[0] = x0;
        for (int j = 0; j < npts[1]; ++j) {
            double x1 = -box[1] + h1 * double(j);
            double w1 = (j == 0 || j == npts[1] - 1) ? 0.5 : 1.0;
            pt[1] = x1;
            double d = dmp.eval(Span(pt, 2));
            if (d < 1e-18) continue;
            acc += w0 * w1 * a(Span(pt, 2), eps) * d * std::polar(1.0, omega.eval(Span(pt, 2)));
        }
        rows[size_t(i)] = acc;
    });
    complexd acc = 0.0;
    for (const auto& r : rows) acc += r;
    return acc * h0 * h1;
}

// p = 2, phase c*x0*x1, amplitude flat along axis 1: iterate the inner
// integral K(x0) = int e^{i c x0 t} damper dt per outer node
complexd iterated_pass(const AmplitudeFn& a, double c, double eps, const Damper& dmp,
                       const AmpProfile& prof) {
    // inner kernel at fixed y (= x0)
    auto kernel = [&](double y) -> complexd {
        if (dmp.kind == DamperKind::GaussPsi) {
            double h = dmp.param;
            // int e^{i c y t} e^{-h^2 (y^2 + t^2)/2} dt, Gaussian in closed form
            double amp = std::sqrt(2.0 * M_PI) / h;
            return amp * std::exp(-0.5 * h * h * y * y - 0.5 * c * c * y * y / (h * h));
        }
        double R = 2.0 * dmp.param;  // plateau support
        if (std::abs(y) >= R) return 0.0;
        double tmax = std::sqrt(R * R - y * y);
        double freq = std::abs(c * y);
        double delta = std::min(0.20, M_PI / (8.0 * freq + 1.0));
        int npts = std::max(64, int(std::ceil(2.0 * tmax / delta)) + 1);
        double hh = 2.0 * tmax / double(npts - 1);
        complexd acc = 0.0;
        for (int i = 0; i < npts; ++i) {
            double t = -tmax + hh * double(i);
            double w = (i == 0 || i == npts - 1) ? 0.5 : 1.0;
            double r = std::sqrt(y * y + t * t);
            acc += w * dmp.eval_radial(r) * std::polar(1.0, c * y * t);
        }
        return acc * hh;
    };

    // outer grid: the kernel concentrates at width ~ 1/param resp. h
    double width = dmp.kind == DamperKind::GaussPsi ? dmp.param : 1.0 / dmp.param;
    double range = std::min(prof.decay_radius[0], std::max(24.0 * width, 4.0));
    double delta = width / 8.0;
    int npts = std::max(129, int(std::ceil(2.0 * range / delta)) + 1);
    double hh = 2.0 * range / double(npts - 1);
    complexd acc = 0.0;
    for (int i = 0; i < npts; ++i) {
        double y = -range + hh * double(i);
        double w = (i == 0 || i == npts - 1) ? 0.5 : 1.0;
        double pt[2] = {y, 0.0};
        acc += w * a(Span(pt, 2), eps) * kernel(y);
    }
    return acc * hh;
}

complexd aitken_limit(const std::vector<complexd>& v, double tol) {
    size_t n = v.size();
    if (n == 0) return 0.0;
    if (n < 3) return v.back();
    complexd a = v[n - 3], b = v[n - 2], c = v[n - 1];
    complexd d1 = b - a, d2 = c - b;
    complexd den = d2 - d1;
    if (std::abs(den) < tol * 1e-3 || std::abs(d2) < tol * 1e-3) return c;
    return c - d2 * d2 / den;
}

bool cauchy_tail(const std::vector<complexd>& v, double tol) {
    size_t n = v.size();
    if (n < 2) return false;
    double d_last = std::abs(v[n - 1] - v[n - 2]);
    if (d_last <= 10.0 * tol) return true;
    // steady geometric decay also certifies the extrapolated limit
    if (n >= 4) {
        double d1 = std::abs(v[n - 3] - v[n - 4]);
        double d2 = std::abs(v[n - 2] - v[n - 3]);
        if (d2 < 0.85 * d1 && d_last < 0.85 * d2) return true;
    }
    return false;
}

}  // namespace

OscIntResult osc_integral(const AmplitudeFn& a, const PhaseFunction& omega, double eps,
                          const OscSchedule& sched) {
    omega.validate();
    if (omega.p > 2) throw std::invalid_argument("osc_integral: p <= 2 at desk scale");

    OscIntResult res;
    AmpProfile prof = probe_amplitude(a, omega.p, eps);

    // fast path: product phase with the amplitude flat along one axis
    double cprod = 0.0;
    bool product_phase = omega.p == 2 && omega.terms.size() == 1 &&
                         omega.terms[0].second == Monomial{1, 1};
    if (product_phase) cprod = omega.terms[0].first;
    bool flat1 = product_phase && prof.flat[1] &&
                 prof.decay_radius[0] < std::numeric_limits<double>::infinity();
    bool flat_any = flat1 || (product_phase && prof.flat[0] && prof.flat[1]);

    AmplitudeFn swapped;  // when only axis 0 is flat, swap the roles
    const AmplitudeFn* ap = &a;
    AmpProfile prof_used = prof;
    if (product_phase && !flat_any && prof.flat[0] &&
        prof.decay_radius[1] < std::numeric_limits<double>::infinity()) {
        swapped = [&a](Span x, double e) {
            double pt[2] = {x[1], x[0]};
            return a(Span(pt, 2), e);
        };
        ap = &swapped;
        std::swap(prof_used.decay_radius[0], prof_used.decay_radius[1]);
        std::swap(prof_used.flat[0], prof_used.flat[1]);
        flat_any = true;
    }

    auto run_family = [&](DamperKind kind, int count, std::vector<complexd>& out) {
        for (int step = 1; step <= count; ++step) {
            Damper dmp{kind, kind == DamperKind::GaussPsi ? std::ldexp(1.0, -step)
                                                          : std::ldexp(1.0, step)};
            complexd val;
            if (flat_any) val = iterated_pass(*ap, cprod, eps, dmp, prof_used);
            else val = tensor_pass(a, omega, eps, dmp, prof, sched, res.budget_limited);
            out.push_back(val);
            // stop early once the family settled well below tolerance
            size_t n = out.size();
            if (n >= 3 && std::abs(out[n - 1] - out[n - 2]) < sched.tol * 1e-2 &&
                std::abs(out[n - 2] - out[n - 3]) < sched.tol * 1e-2)
                break;
        }
    };

    run_family(DamperKind::GaussPsi, sched.h_count, res.psi_values);
    run_family(DamperKind::PlateauPhi, sched.j_count, res.phi_values);

    res.psi_limit = aitken_limit(res.psi_values, sched.tol);
    res.phi_limit = aitken_limit(res.phi_values, sched.tol);
    res.agreement = std::abs(res.psi_limit - res.phi_limit);
    res.converged = cauchy_tail(res.psi_values, sched.tol) &&
                    cauchy_tail(res.phi_values, sched.tol) && res.agreement <= 10.0 * sched.tol;
    res.value = res.psi_limit;
    return res;
}

}  // namespace psido
