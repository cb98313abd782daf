// Evaluation access to symbols for the sampling-based checks: exact handles
// wrap a SymbolExpr and differentiate symbolically; black-box handles wrap a
// numeric callable and differentiate by central finite differences.
#pragma once

#include "psidocalc/symbolic.hpp"

#include <functional>
#include <map>

namespace psido {

struct SampleSpec {
    double box_L = 10.0;
    int n_samples = 400;
    int eps_j_lo = 1;
    int eps_j_hi = 12;
    uint64_t seed = 0;
    double exclude_radius = 0.0;  // skip |z| <= exclude_radius (cutoff annulus)

    std::vector<double> eps_grid() const { return standard_eps_grid(eps_j_lo, eps_j_hi); }
    SampleSpec doubled_box() const {
        SampleSpec s = *this;
        s.box_L *= 2.0;
        return s;
    }
};

// points uniform in the box, with |z| <= exclude skipped; when axes is true
// the coordinate half-axes are probed as well (hypoellipticity witnesses
// tend to sit there)
std::vector<VecD> sample_points(const SampleSpec& spec, int dim, bool axes = false);

using SymbolFn = std::function<complexd(Span, double)>;

class SymbolHandle {
public:
    explicit SymbolHandle(SymbolExpr expr);
    SymbolHandle(int n, VarSpace space, SymbolFn fn, double fd_step = 1e-3);

    bool exact() const { return exact_; }
    int dim_n() const { return n_; }
    VarSpace space() const { return space_; }
    int nvars() const { return space_ == VarSpace::Symbol ? 2 * n_ : 3 * n_; }

    complexd eval(Span z, double eps) const;
    complexd eval_deriv(const Multi& alpha, Span z, double eps) const;

    // exact handles only: the symbolic derivative
    const SymbolExpr& deriv_expr(const Multi& alpha) const;
    const SymbolExpr& expr() const;

private:
    bool exact_ = false;
    int n_ = 1;
    VarSpace space_ = VarSpace::Symbol;
    SymbolExpr expr_;
    SymbolFn fn_;
    double fd_step_ = 1e-3;
    mutable std::map<Multi, SymbolExpr> deriv_cache_;
    complexd fd_deriv(const Multi& alpha, Span z, double eps) const;
};

// slope of log max_dirs |f| against log r over a geometric radius ladder
struct RadialFit {
    double slope = 0.0;
    std::vector<double> radii;
    std::vector<double> values;
    bool usable = false;  // false when the function vanished along the ladder
};

RadialFit fitted_radial_order(const std::function<complexd(Span, double)>& f, int dim,
                              double r_lo, double r_hi, int n_radii, int n_dirs, double eps,
                              uint64_t seed = 0);

}  // namespace psido
