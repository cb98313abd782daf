// Oscillatory integrals  int e^{i omega(x)} a_eps(x) dx  through the two
// regularizations: a Schwartz damper psi(hx) (Gaussian) with h -> 0+, and
// the compact plateau phi(2^{-j} x) with j -> infinity. Both limits are
// evaluated by dense quadrature and extrapolated; the result reports the
// pair and their agreement.
#pragma once

#include "psidocalc/common.hpp"
#include "psidocalc/poly.hpp"

#include <functional>

namespace psido {

struct PhaseFunction {
    int p = 2;  // variables
    int k = 2;  // homogeneity order
    std::vector<std::pair<double, Monomial>> terms;

    double eval(Span x) const;
    VecD grad(Span x) const;
    // real-valued, positively homogeneous, gradient nonzero off the origin
    // (sampled on the unit sphere); throws when violated
    void validate(uint64_t seed = 0) const;

    // c * x0 * x1 on R^2 (order 2); the workhorse phase -y.eta has c = -1
    static PhaseFunction product(double c);
};

struct OscSchedule {
    int h_count = 8;        // h = 2^-1 .. 2^-h_count
    int j_count = 6;        // j = 1 .. j_count
    double tol = 1e-6;
    double node_budget = 2.5e7;  // tensor nodes per quadrature pass
};

struct OscIntResult {
    complexd value{};
    complexd psi_limit{};
    complexd phi_limit{};
    double agreement = 0.0;   // |psi_limit - phi_limit|
    bool converged = false;
    bool budget_limited = false;
    std::vector<complexd> psi_values, phi_values;
};

using AmplitudeFn = std::function<complexd(Span, double)>;

OscIntResult osc_integral(const AmplitudeFn& a, const PhaseFunction& omega, double eps,
                          const OscSchedule& sched = {});

}  // namespace psido
