// shared test-only oracles: dense-quadrature application of amplitude
// operators (independent of the 0-symbol reduction path it checks)
#pragma once

#include "psidocalc/grid.hpp"
#include "psidocalc/symbolic.hpp"

namespace psido::testing {

// A u(x) = int int e^{i(x-y)xi} a(x,y,xi) u(y) phi_hat(eps y) dy dxi/2pi
// by direct double quadrature over the grid and its dual; n = 1
inline GridFunction dense_amplitude_apply(const SymbolExpr& amp, const GridFunction& u,
                                          const Mollifier& phi) {
    if (amp.space() != VarSpace::Amplitude || u.n != 1)
        throw std::invalid_argument("dense_amplitude_apply: 1-d amplitude expected");
    CompiledSymbol ca(amp, u.eps);
    const int pts = u.pts;
    const double h = u.h();
    const double dxi = M_PI / u.L;
    GridFunction out = GridFunction::make(1, u.L, pts, u.eps);
    parallel_for(pts, [&](int ix) {
        double x = u.coord(ix);
        complexd acc = 0.0;
        for (int k = 0; k < pts; ++k) {
            double xi = dxi * (double(k) - double(pts) / 2.0);
            complexd inner = 0.0;
            for (int jy = 0; jy < pts; ++jy) {
                double y = u.coord(jy);
                double pt3[3] = {x, y, xi};
                inner += std::polar(1.0, -y * xi) * ca.eval(Span(pt3, 3)) * u.at(jy) *
                         phi.hat1(u.eps, y);
            }
            acc += std::polar(1.0, x * xi) * inner;
        }
        out.at(ix) = acc * h * dxi / (2.0 * M_PI);
    });
    return out;
}

inline GridFunction gaussian_grid(double L, int pts, double eps, double sigma = 1.0) {
    return GridFunction::from_fn(1, L, pts, eps, [sigma](Span x) {
        return complexd(std::exp(-0.5 * x[0] * x[0] / (sigma * sigma)), 0.0);
    });
}

}  // namespace psido::testing
