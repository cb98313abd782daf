#include "psidocalc/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace psido {

std::vector<VecD> sample_points(const SampleSpec& spec, int dim, bool axes) {
    // unit-cube points scaled by the box: runs at box L and 2L then share the
    // relative geometry, so sup ratios measure genuine growth under dilation
    // rather than sampling noise
    Rng rng(spec.seed);
    std::vector<VecD> pts;
    pts.reserve(size_t(spec.n_samples) + size_t(axes ? 4 * dim : 0));
    int generated = 0;
    while (generated < spec.n_samples) {
        ++generated;
        VecD z(size_t(dim), 0.0);
        for (auto& v : z) v = rng.uniform(-1.0, 1.0) * spec.box_L;
        if (spec.exclude_radius > 0 && norm2(z) <= spec.exclude_radius) continue;
        pts.push_back(std::move(z));
    }
    if (axes) {
        for (int d = 0; d < dim; ++d) {
            for (double s : {-1.0, 1.0}) {
                for (double f : {0.5, 1.0}) {
                    VecD z(size_t(dim), 0.0);
                    z[size_t(d)] = s * f * spec.box_L;
                    if (spec.exclude_radius > 0 && norm2(z) <= spec.exclude_radius) continue;
                    pts.push_back(std::move(z));
                }
            }
        }
    }
    // a fixed near-field set, independent of the box: sups attained at a
    // fixed absolute scale then appear identically in both box runs
    Rng rng2(spec.seed ^ 0x5deece66dULL);
    int n_fixed = std::max(128, spec.n_samples);
    double near_L = 4.0;
    for (int i = 0; i < n_fixed; ++i) {
        VecD z(size_t(dim), 0.0);
        for (auto& v : z) v = rng2.uniform(-near_L, near_L);
        if (spec.exclude_radius > 0 && norm2(z) <= spec.exclude_radius) continue;
        pts.push_back(std::move(z));
    }
    return pts;
}

SymbolHandle::SymbolHandle(SymbolExpr expr)
    : exact_(true), n_(expr.dim_n()), space_(expr.space()), expr_(std::move(expr)) {}

SymbolHandle::SymbolHandle(int n, VarSpace space, SymbolFn fn, double fd_step)
    : exact_(false), n_(n), space_(space), fn_(std::move(fn)), fd_step_(fd_step) {}

complexd SymbolHandle::eval(Span z, double eps) const {
    return exact_ ? expr_.eval(z, eps) : fn_(z, eps);
}

const SymbolExpr& SymbolHandle::expr() const {
    if (!exact_) throw std::logic_error("SymbolHandle: black-box handle has no expression");
    return expr_;
}

const SymbolExpr& SymbolHandle::deriv_expr(const Multi& alpha) const {
    if (!exact_) throw std::logic_error("SymbolHandle: black-box handle has no expression");
    auto it = deriv_cache_.find(alpha);
    if (it != deriv_cache_.end()) return it->second;
    auto [pos, ok] = deriv_cache_.emplace(alpha, expr_.differentiate_multi(alpha, false));
    return pos->second;
}

complexd SymbolHandle::eval_deriv(const Multi& alpha, Span z, double eps) const {
    if (int(alpha.size()) != nvars())
        throw std::invalid_argument("SymbolHandle: multi-index size mismatch");
    if (exact_) return deriv_expr(alpha).eval(z, eps);
    return fd_deriv(alpha, z, eps);
}

// central-difference weights for d^k, second-order accurate
static const std::vector<double>& fd_weights(unsigned k) {
    static const std::vector<std::vector<double>> tables = {
        {1.0},
        {-0.5, 0.0, 0.5},
        {1.0, -2.0, 1.0},
        {-0.5, 1.0, 0.0, -1.0, 0.5},
        {1.0, -4.0, 6.0, -4.0, 1.0},
        {-0.5, 2.0, -2.5, 0.0, 2.5, -2.0, 0.5},
        {1.0, -6.0, 15.0, -20.0, 15.0, -6.0, 1.0},
    };
    if (k >= tables.size())
        throw std::invalid_argument("SymbolHandle: finite differences support order <= 6");
    return tables[k];
}

complexd SymbolHandle::fd_deriv(const Multi& alpha, Span z, double eps) const {
    // tensor-compose 1-d stencils across the variables with alpha_v > 0
    struct Axis {
        size_t var;
        unsigned order;
        double h;
    };
    std::vector<Axis> axes;
    for (size_t v = 0; v < alpha.size(); ++v) {
        if (alpha[v] > 0) {
            double h = fd_step_ * (1.0 + std::abs(z[v]));
            axes.push_back({v, alpha[v], h});
        }
    }
    if (axes.empty()) return fn_(z, eps);

    VecD pt(z.begin(), z.end());
    std::function<complexd(size_t)> rec = [&](size_t a) -> complexd {
        if (a == axes.size()) return fn_(pt, eps);
        const auto& ax = axes[a];
        const auto& w = fd_weights(ax.order);
        int half = int(w.size()) / 2;
        complexd acc = 0.0;
        double keep = pt[ax.var];
        for (int s = 0; s < int(w.size()); ++s) {
            if (w[size_t(s)] == 0.0) continue;
            pt[ax.var] = keep + double(s - half) * ax.h;
            acc += w[size_t(s)] * rec(a + 1);
        }
        pt[ax.var] = keep;
        double scale = std::pow(ax.h, double(ax.order));
        return acc / scale;
    };
    return rec(0);
}

RadialFit fitted_radial_order(const std::function<complexd(Span, double)>& f, int dim,
                              double r_lo, double r_hi, int n_radii, int n_dirs, double eps,
                              uint64_t seed) {
    if (n_radii < 3) throw std::invalid_argument("fitted_radial_order: need >= 3 radii");
    Rng rng(seed);
    std::vector<VecD> dirs;
    for (int d = 0; d < dim; ++d) {
        VecD e(size_t(dim), 0.0);
        e[size_t(d)] = 1.0;
        dirs.push_back(e);
        e[size_t(d)] = -1.0;
        dirs.push_back(e);
    }
    while (int(dirs.size()) < 2 * dim + n_dirs) {
        VecD v(size_t(dim), 0.0);
        double r2 = 0;
        for (auto& c : v) {
            c = rng.uniform(-1.0, 1.0);
            r2 += c * c;
        }
        double r = std::sqrt(r2);
        if (r < 1e-3) continue;
        for (auto& c : v) c /= r;
        dirs.push_back(std::move(v));
    }

    RadialFit fit;
    double ratio = std::pow(r_hi / r_lo, 1.0 / double(n_radii - 1));
    std::vector<double> xs, ys;
    for (int i = 0; i < n_radii; ++i) {
        double r = r_lo * std::pow(ratio, double(i));
        double mx = 0.0;
        for (const auto& d : dirs) {
            VecD z(size_t(dim), 0.0);
            for (size_t j = 0; j < z.size(); ++j) z[j] = r * d[j];
            mx = std::max(mx, std::abs(f(z, eps)));
        }
        fit.radii.push_back(r);
        fit.values.push_back(mx);
        if (mx > 1e-290) {
            xs.push_back(std::log(r));
            ys.push_back(std::log(mx));
        }
    }
    if (xs.size() >= 3) {
        fit.slope = ls_slope(xs, ys);
        fit.usable = true;
    }
    return fit;
}

}  // namespace psido
