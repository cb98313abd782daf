// Weak (generalized tempered distribution) equality at desk scale: pairings
// of grid families against embedded Hermite test functions over an eps
// sweep, classified with the sampled-net estimator. Also the S-regularity
// instance check and the end-to-end parametrix regularity experiment.
#pragma once

#include "psidocalc/calculus.hpp"
#include "psidocalc/grid.hpp"

namespace psido {

struct GridFamily {
    std::vector<double> eps;
    std::vector<GridFunction> u;
    size_t size() const { return eps.size(); }
};

GridFamily make_family(int n, double L, int pts, const std::vector<double>& eps_list,
                       const std::function<complexd(Span, double)>& f);

// image of the k-th Hermite test function under the embedding: the transform
// of H_k(xi) e^{-xi^2/2} is analytic, the plateau multiplies in Fourier space
GridFunction embedded_hermite(int k, const GridFunction& like, const Mollifier& phi);
double hermite_poly(int k, double x);

struct WeakEqOptions {
    int max_hermite = 6;
    double floor_rel = 1e-12;  // pairing magnitudes below this (relative) count as zero
    int q_max = 10;
};

struct WeakEqReport {
    bool equal = false;
    std::vector<double> eps;
    std::vector<double> slopes;            // per test function
    std::vector<NetVerdict> verdicts;      // per test function
    std::vector<std::vector<double>> magnitudes;  // [test][eps]
};

WeakEqReport weak_equal(const GridFamily& u, const GridFamily& v, const Mollifier& phi,
                        const WeakEqOptions& opt = {});

// S-regularity instance: sup_eps eps^N || x^alpha d^beta u_eps ||_inf on the
// grid, derivatives taken spectrally; N estimated from the eps-slopes
struct SRegReport {
    int N = 0;
    bool bounded = true;  // constants stable over the family
    std::map<std::pair<int, int>, double> constants;  // (alpha, beta) -> c
};
SRegReport check_sregular(const GridFamily& u, const Mollifier& phi, int order_max = 3);

// --- the regularity experiment ----------------------------------------------

struct RegularityReport {
    std::vector<int> Ks;
    double eps_star = 0.03125;
    std::vector<double> defect_at_star;           // [K]
    std::vector<double> eps;                      // sweep for the weak test
    std::vector<std::vector<double>> defect;      // [K][eps]
    WeakEqReport weak;                            // w(K_max) vs u over the sweep
    // w(K_max) vs u + Op(residual)u: the composition theorem equates the
    // recovered function weakly with u plus the smoothing remainder applied
    // to u, so this pairing is the one the theory makes negligible
    WeakEqReport weak_vs_corrected;
    bool monotone = false;
};

RegularityReport regularity_experiment(const SymbolExpr& a, const Parametrix& px,
                                       const GridFamily& u, const Mollifier& phi,
                                       double eps_star);

}  // namespace psido
