#include "psidocalc/grid.hpp"

#if __has_include(<nlohmann/json.hpp>)
#include <nlohmann/json.hpp>
#else
#include "json.hpp"
#endif

#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>

namespace psido {

using json = nlohmann::json;

GridFunction GridFunction::make(int n, double L, int pts, double eps) {
    if (n < 1 || n > 2) throw std::invalid_argument("grid: n must be 1 or 2");
    if (pts < 16 || (pts & (pts - 1)) != 0)
        throw std::invalid_argument("grid: points per axis must be a power of two >= 16");
    if (n == 2 && pts > 64) throw std::invalid_argument("grid: n = 2 capped at 64 points per axis");
    if (!(L > 0)) throw std::invalid_argument("grid: box half-width must be positive");
    if (!(eps > 0 && eps <= 1)) throw std::invalid_argument("grid: eps must lie in (0,1]");
    GridFunction g;
    g.n = n;
    g.L = L;
    g.pts = pts;
    g.eps = eps;
    g.v.assign(n == 1 ? size_t(pts) : size_t(pts) * size_t(pts), complexd(0.0));
    return g;
}

GridFunction GridFunction::from_fn(int n, double L, int pts, double eps,
                                   const std::function<complexd(Span)>& f) {
    GridFunction g = make(n, L, pts, eps);
    if (n == 1) {
        for (int j = 0; j < pts; ++j) {
            double x = g.coord(j);
            g.at(j) = f(Span(&x, 1));
        }
    } else {
        for (int i = 0; i < pts; ++i) {
            for (int j = 0; j < pts; ++j) {
                double xy[2] = {g.coord(i), g.coord(j)};
                g.at(i, j) = f(Span(xy, 2));
            }
        }
    }
    return g;
}

double GridFunction::linf() const {
    double m = 0;
    for (const auto& c : v) m = std::max(m, std::abs(c));
    return m;
}

double GridFunction::linf_diff(const GridFunction& o) const {
    if (o.v.size() != v.size()) throw std::invalid_argument("grid: size mismatch");
    double m = 0;
    for (size_t i = 0; i < v.size(); ++i) m = std::max(m, std::abs(v[i] - o.v[i]));
    return m;
}

double GridFunction::l2() const {
    double s = 0;
    for (const auto& c : v) s += std::norm(c);
    double cell = h();
    return std::sqrt(s * (n == 1 ? cell : cell * cell));
}

namespace {

// 1-d transform core: out_k = scale * sum_j e^{sgn i x_j xi_k} w_j
void transform_axis(const std::vector<complexd>& in, std::vector<complexd>& out, double L,
                    int pts, double sign, double scale) {
    double h = 2.0 * L / double(pts);
    double dxi = M_PI / L;
    out.assign(size_t(pts), complexd(0.0));
    parallel_for(pts, [&](int k) {
        double xi = dxi * (double(k) - double(pts) / 2.0);
        complexd acc = 0.0;
        for (int j = 0; j < pts; ++j) {
            double x = -L + h * double(j);
            acc += in[size_t(j)] * std::polar(1.0, sign * x * xi);
        }
        out[size_t(k)] = acc * scale;
    });
}

}  // namespace

GridFunction cf_transform(const GridFunction& u, const Mollifier& phi, TransformDir dir) {
    const int pts = u.pts;
    const double sign = dir == TransformDir::Forward ? -1.0 : 1.0;
    // quadrature weight: input spacing, with the 1/(2 pi) of d-slash on the inverse
    double cell = dir == TransformDir::Forward ? u.h() : u.h() / (2.0 * M_PI);

    GridFunction out = GridFunction::make(u.n, u.dual_L(), pts, u.eps);
    out.resolution_warn = u.resolution_warn || (2.0 / u.eps > u.L);

    if (u.n == 1) {
        std::vector<complexd> damped(size_t(pts), complexd(0.0));
        for (int j = 0; j < pts; ++j) {
            double x = u.coord(j);
            damped[size_t(j)] = u.at(j) * phi.hat1(u.eps, x);
        }
        std::vector<complexd> res;
        transform_axis(damped, res, u.L, pts, sign, cell);
        out.v = std::move(res);
        return out;
    }

    // n = 2: pointwise radial mollifier, then separable axis transforms
    std::vector<complexd> work(u.v.size());
    for (int i = 0; i < pts; ++i) {
        for (int j = 0; j < pts; ++j) {
            double xy[2] = {u.coord(i), u.coord(j)};
            work[size_t(i) * size_t(pts) + size_t(j)] = u.at(i, j) * phi.hat(u.eps, Span(xy, 2));
        }
    }
    std::vector<complexd> line(size_t(pts), complexd(0.0)), res;
    // rows (second index)
    for (int i = 0; i < pts; ++i) {
        for (int j = 0; j < pts; ++j) line[size_t(j)] = work[size_t(i) * size_t(pts) + size_t(j)];
        transform_axis(line, res, u.L, pts, sign, cell);
        for (int j = 0; j < pts; ++j) work[size_t(i) * size_t(pts) + size_t(j)] = res[size_t(j)];
    }
    // columns (first index)
    for (int j = 0; j < pts; ++j) {
        for (int i = 0; i < pts; ++i) line[size_t(i)] = work[size_t(i) * size_t(pts) + size_t(j)];
        transform_axis(line, res, u.L, pts, sign, cell);
        for (int i = 0; i < pts; ++i) work[size_t(i) * size_t(pts) + size_t(j)] = res[size_t(i)];
    }
    out.v = std::move(work);
    return out;
}

GridFunction apply_operator_fn(const std::function<complexd(Span, double)>& a0, int n,
                               const GridFunction& u, const Mollifier& phi,
                               OperatorVariant variant) {
    if (n != u.n) throw std::invalid_argument("apply: symbol/grid dimension mismatch");
    GridFunction uhat = cf_transform(u, phi, TransformDir::Forward);
    GridFunction out = GridFunction::make(u.n, u.L, u.pts, u.eps);
    out.resolution_warn = uhat.resolution_warn;
    const int pts = u.pts;
    const double dxi = M_PI / u.L;
    const double cell = dxi / (2.0 * M_PI);

    if (u.n == 1) {
        parallel_for(pts, [&](int jx) {
            double x = u.coord(jx);
            complexd acc = 0.0;
            for (int k = 0; k < pts; ++k) {
                double xi = dxi * (double(k) - double(pts) / 2.0);
                double pt[2] = {x, xi};
                complexd sym = a0(Span(pt, 2), u.eps);
                if (variant == OperatorVariant::Atilde) sym *= phi.hat1(u.eps, xi);
                acc += std::polar(1.0, x * xi) * sym * uhat.at(k);
            }
            out.at(jx) = acc * cell;
        });
        return out;
    }

    // n = 2
    parallel_for(pts, [&](int ix) {
        for (int jx = 0; jx < pts; ++jx) {
            double x0 = u.coord(ix), x1 = u.coord(jx);
            complexd acc = 0.0;
            for (int kx = 0; kx < pts; ++kx) {
                double xi0 = dxi * (double(kx) - double(pts) / 2.0);
                for (int lx = 0; lx < pts; ++lx) {
                    double xi1 = dxi * (double(lx) - double(pts) / 2.0);
                    double pt[4] = {x0, x1, xi0, xi1};
                    complexd sym = a0(Span(pt, 4), u.eps);
                    if (variant == OperatorVariant::Atilde) {
                        double xiv[2] = {xi0, xi1};
                        sym *= phi.hat(u.eps, Span(xiv, 2));
                    }
                    acc += std::polar(1.0, x0 * xi0 + x1 * xi1) * sym * uhat.at(kx, lx);
                }
            }
            out.at(ix, jx) = acc * cell * cell;
        }
    });
    return out;
}

GridFunction apply_operator(const SymbolExpr& a0, const GridFunction& u, const Mollifier& phi,
                            OperatorVariant variant) {
    if (a0.space() != VarSpace::Symbol)
        throw std::invalid_argument("apply: 0-symbol expected (reduce amplitudes first)");
    CompiledSymbol cs(a0, u.eps);
    return apply_operator_fn(
        [&cs](Span z, double) { return cs.eval(z); }, a0.dim_n(), u, phi, variant);
}

void save_grid(const GridFunction& g, const std::string& bin_path,
               const std::string& sidecar_path) {
    std::ofstream bin(bin_path, std::ios::binary);
    if (!bin) throw std::runtime_error("grid: cannot open " + bin_path);
    for (const auto& c : g.v) {
        float re = float(c.real()), im = float(c.imag());
        bin.write(reinterpret_cast<const char*>(&re), 4);
        bin.write(reinterpret_cast<const char*>(&im), 4);
    }
    json side;
    side["n"] = g.n;
    side["L"] = g.L;
    side["points"] = g.pts;
    side["eps"] = g.eps;
    std::ofstream sc(sidecar_path);
    sc << side.dump(2) << "\n";
}

GridFunction load_grid(const std::string& bin_path, const std::string& sidecar_path) {
    std::ifstream sc(sidecar_path);
    if (!sc) throw std::runtime_error("grid: cannot open " + sidecar_path);
    json side = json::parse(sc);
    GridFunction g = GridFunction::make(side.at("n"), side.at("L"), side.at("points"),
                                        side.at("eps"));
    std::ifstream bin(bin_path, std::ios::binary);
    if (!bin) throw std::runtime_error("grid: cannot open " + bin_path);
    for (auto& c : g.v) {
        float re = 0, im = 0;
        bin.read(reinterpret_cast<char*>(&re), 4);
        bin.read(reinterpret_cast<char*>(&im), 4);
        c = complexd(re, im);
    }
    if (!bin) throw std::runtime_error("grid: binary payload too short");
    return g;
}

}  // namespace psido
