// Mollifiers realized in Fourier space: phi_hat is a smooth radial plateau,
// identically 1 inside `inner` and 0 outside `outer`, glued with exp(-1/t).
// All moments of phi of order >= 1 then vanish and the integral of phi is 1.
// The same glue builds the cutoff psi used by asymptotic sums and p0.
#pragma once

#include "psidocalc/common.hpp"

#include <string>

namespace psido {

// 0 for t <= a, 1 for t >= b, smooth in between
double smoothstep(double t, double a, double b);

// psi(t): 0 for t <= 1, 1 for t >= 2  (the cutoff of the asymptotic-sum
// construction and of p0, applied to lambda_j*Lambda(z) resp. |z|/R)
inline double cutoff_psi(double t) { return smoothstep(t, 1.0, 2.0); }

// psi(|z|/R) with the degenerate R = 0 meaning "no cutoff"
inline double cutoff_psi_radius(double r, double R) {
    return R <= 0.0 ? 1.0 : smoothstep(r, R, 2.0 * R);
}

struct Mollifier {
    int moment_order = 0;    // q; the plateau profile has all moments vanishing
    double inner = 1.0;      // phi_hat == 1 for |xi| <= inner
    double outer = 2.0;      // phi_hat == 0 for |xi| >= outer

    double fourier(double r) const { return 1.0 - smoothstep(r, inner, outer); }

    // phi_hat_eps(x) = phi_hat(eps * x), radial in x
    double hat(double eps, Span x) const { return fourier(eps * norm2(x)); }
    double hat1(double eps, double x) const { return fourier(eps * std::abs(x)); }

    // spatial phi(x) in one dimension, by quadrature of the profile
    double spatial(double x) const;

    // moment  int x^alpha phi(x) dx  on the reference quadrature (n = 1);
    // the reference truncates at |x| <= moment_box with composite panels.
    // phi decays like exp(-c sqrt|x|) with c near 1.5; the default box puts
    // the truncation tail below 1e-10 for alpha <= 4.
    double moment(int alpha) const;

    double moment_box = 3000.0;
};

// profile must be "plateau"; q >= 0 (all moments vanish regardless of q;
// q records how far the numeric invariant is checked)
Mollifier make_mollifier(int q, const std::string& profile);

// variant with a wider plateau (used by the mollifier-independence tests)
Mollifier make_plateau(double inner, double outer, int q = 4);

}  // namespace psido
