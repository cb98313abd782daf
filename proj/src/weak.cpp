#include "psidocalc/weak.hpp"

#include <cmath>
#include <stdexcept>

namespace psido {

GridFamily make_family(int n, double L, int pts, const std::vector<double>& eps_list,
                       const std::function<complexd(Span, double)>& f) {
    GridFamily fam;
    for (double eps : eps_list) {
        fam.eps.push_back(eps);
        fam.u.push_back(GridFunction::from_fn(n, L, pts, eps,
                                              [&](Span x) { return f(x, eps); }));
    }
    return fam;
}

double hermite_poly(int k, double x) {
    // physicists' recurrence
    double h0 = 1.0, h1 = 2.0 * x;
    if (k == 0) return h0;
    if (k == 1) return h1;
    for (int i = 2; i <= k; ++i) {
        double h2 = 2.0 * x * h1 - 2.0 * double(i - 1) * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

GridFunction embedded_hermite(int k, const GridFunction& like, const Mollifier& phi) {
    if (like.n != 1) throw std::invalid_argument("weak tests run in one dimension");
    // f_img(x) = (1/2pi) int e^{i x xi} fhat(xi) phi_hat(eps xi) dxi with
    // fhat(xi) = sqrt(2pi) (-i)^k H_k(xi) e^{-xi^2/2}
    GridFunction out = GridFunction::make(1, like.L, like.pts, like.eps);
    const int pts = like.pts;
    // integrate over the dual grid of `like`
    const double Ld = like.dual_L();
    const double dx = 2.0 * Ld / double(pts);
    complexd mik = std::pow(complexd(0.0, -1.0), k);
    parallel_for(pts, [&](int j) {
        double x = out.coord(j);
        complexd acc = 0.0;
        for (int q = 0; q < pts; ++q) {
            double xi = -Ld + dx * double(q);
            double fhat = std::sqrt(2.0 * M_PI) * hermite_poly(k, xi) * std::exp(-0.5 * xi * xi);
            acc += std::polar(1.0, x * xi) * mik * fhat * phi.hat1(like.eps, xi);
        }
        out.at(j) = acc * dx / (2.0 * M_PI);
    });
    return out;
}

WeakEqReport weak_equal(const GridFamily& u, const GridFamily& v, const Mollifier& phi,
                        const WeakEqOptions& opt) {
    if (u.size() != v.size() || u.size() == 0)
        throw std::invalid_argument("weak_equal: families must share the eps grid");
    for (size_t i = 0; i < u.size(); ++i) {
        if (u.eps[i] != v.eps[i] || u.u[i].pts != v.u[i].pts || u.u[i].L != v.u[i].L ||
            u.u[i].n != v.u[i].n)
            throw std::invalid_argument("weak_equal: mismatched grids");
        if (u.u[i].n != 1) throw std::invalid_argument("weak_equal: one dimension at desk scale");
    }

    WeakEqReport rep;
    rep.eps = u.eps;
    rep.equal = true;
    for (int k = 0; k <= opt.max_hermite; ++k) {
        std::vector<std::pair<double, double>> samples;
        std::vector<double> mags;
        for (size_t i = 0; i < u.size(); ++i) {
            const auto& ug = u.u[i];
            const auto& vg = v.u[i];
            GridFunction fimg = embedded_hermite(k, ug, phi);
            double h = ug.h();
            complexd I = 0.0;
            double scale = 0.0;
            for (int j = 0; j < ug.pts; ++j) {
                double x = ug.coord(j);
                double hat = phi.hat1(ug.eps, x);
                complexd w = fimg.at(j) * hat * h;
                I += (ug.at(j) - vg.at(j)) * w;
                scale += (std::abs(ug.at(j)) + std::abs(vg.at(j))) * std::abs(w);
            }
            double mag = std::abs(I);
            if (mag <= opt.floor_rel * std::max(scale, 1e-30)) mag = 0.0;
            samples.emplace_back(ug.eps, mag);
            mags.push_back(mag);
        }
        ExponentOptions eo;
        eo.q_max = opt.q_max;
        eo.lenient = true;
        auto est = estimate_exponent(samples, eo);
        rep.slopes.push_back(est.slope);
        rep.verdicts.push_back(est.verdict);
        rep.magnitudes.push_back(mags);
        if (!(est.verdict.kind == NetClass::Negligible)) rep.equal = false;
    }
    return rep;
}

SRegReport check_sregular(const GridFamily& u, const Mollifier& phi, int order_max) {
    SRegReport rep;
    double worst_slope = 0.0;
    for (int beta = 0; beta <= order_max; ++beta) {
        for (int alpha = 0; alpha <= order_max; ++alpha) {
            std::vector<double> eps_list, sups;
            for (size_t i = 0; i < u.size(); ++i) {
                const auto& g = u.u[i];
                // spectral derivative: transform, multiply (i xi)^beta, invert
                GridFunction ghat = cf_transform(g, phi, TransformDir::Forward);
                for (int q = 0; q < ghat.pts; ++q) {
                    double xi = ghat.coord(q);
                    ghat.at(q) *= std::pow(complexd(0.0, xi), beta);
                }
                GridFunction db = cf_transform(ghat, phi, TransformDir::Inverse);
                double sup = 0.0;
                for (int j = 0; j < g.pts; ++j) {
                    double x = g.coord(j);
                    sup = std::max(sup, std::pow(std::abs(x), alpha) * std::abs(db.at(j)));
                }
                eps_list.push_back(g.eps);
                sups.push_back(sup);
            }
            std::vector<double> xs, ys;
            for (size_t i = 0; i < sups.size(); ++i) {
                if (sups[i] > 1e-290) {
                    xs.push_back(-std::log(eps_list[i]));
                    ys.push_back(std::log(sups[i]));
                }
            }
            double slope = xs.size() >= 3 ? ls_slope(xs, ys) : 0.0;
            worst_slope = std::max(worst_slope, slope);
            double cmax = 0.0;
            for (double s : sups) cmax = std::max(cmax, s);
            rep.constants[{alpha, beta}] = cmax;
        }
    }
    rep.N = int(std::max(0.0, std::ceil(worst_slope - 0.1)));
    // bounded when eps^N tames every seminorm on the family
    rep.bounded = std::isfinite(worst_slope);
    return rep;
}

RegularityReport regularity_experiment(const SymbolExpr& a, const Parametrix& px,
                                       const GridFamily& u, const Mollifier& phi,
                                       double eps_star) {
    RegularityReport rep;
    rep.eps_star = eps_star;
    rep.eps = u.eps;
    for (int K = 0; K <= px.K; ++K) rep.Ks.push_back(K);

    // partial parametrix sums
    std::vector<SymbolExpr> psums;
    {
        SymbolExpr s = px.terms.at(0);
        psums.push_back(s);
        for (int k = 1; k <= px.K; ++k) {
            s = s + px.terms[size_t(k)];
            psums.push_back(s);
        }
    }

    rep.defect.assign(psums.size(), std::vector<double>(u.size(), 0.0));
    GridFamily w_last, u_corrected;
    for (size_t i = 0; i < u.size(); ++i) {
        const auto& ug = u.u[i];
        GridFunction v = apply_operator(a, ug, phi);
        double unorm = ug.linf();
        for (size_t K = 0; K < psums.size(); ++K) {
            GridFunction w = apply_operator(psums[K], v, phi);
            rep.defect[K][i] = w.linf_diff(ug) / std::max(unorm, 1e-300);
            if (K + 1 == psums.size()) {
                w_last.eps.push_back(ug.eps);
                w_last.u.push_back(std::move(w));
            }
        }
        GridFunction corr = apply_operator(px.composed_residual, ug, phi);
        GridFunction up = ug;
        for (size_t j = 0; j < up.v.size(); ++j) up.v[j] += corr.v[j];
        u_corrected.eps.push_back(ug.eps);
        u_corrected.u.push_back(std::move(up));
    }

    // defect at the pinned eps
    size_t star = 0;
    double best = 1e300;
    for (size_t i = 0; i < u.size(); ++i) {
        double d = std::abs(u.eps[i] - eps_star);
        if (d < best) {
            best = d;
            star = i;
        }
    }
    rep.monotone = true;
    for (size_t K = 0; K < psums.size(); ++K) {
        rep.defect_at_star.push_back(rep.defect[K][star]);
        if (K > 0 && !(rep.defect[K][star] < rep.defect[K - 1][star])) rep.monotone = false;
    }

    rep.weak = weak_equal(w_last, u, phi);
    rep.weak_vs_corrected = weak_equal(w_last, u_corrected, phi);
    return rep;
}

}  // namespace psido
