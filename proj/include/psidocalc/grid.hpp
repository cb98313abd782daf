// Numeric realization on uniform box grids: the discrete Colombeau-Fourier
// transform (direct quadrature against the mollifier plateau, no FFT phase
// juggling at desk scale) and pseudo-differential operator application
// through the 0-symbol form.
#pragma once

#include "psidocalc/mollifier.hpp"
#include "psidocalc/symbolic.hpp"

#include <functional>

namespace psido {

struct GridFunction {
    int n = 1;            // dimension (1 or 2)
    double L = 12.0;      // box half-width; grid points -L + j*(2L/pts)
    int pts = 256;        // per axis, power of two, >= 16
    double eps = 0.015625;
    std::vector<complexd> v;           // pts^n samples, row-major
    bool resolution_warn = false;      // plateau of phi_hat_eps exceeds the box

    static GridFunction make(int n, double L, int pts, double eps);
    static GridFunction from_fn(int n, double L, int pts, double eps,
                                const std::function<complexd(Span)>& f);

    double h() const { return 2.0 * L / double(pts); }
    double coord(int j) const { return -L + h() * double(j); }
    size_t size() const { return v.size(); }

    complexd& at(int i) { return v[size_t(i)]; }
    complexd& at(int i, int j) { return v[size_t(i) * size_t(pts) + size_t(j)]; }
    complexd at(int i) const { return v[size_t(i)]; }
    complexd at(int i, int j) const { return v[size_t(i) * size_t(pts) + size_t(j)]; }

    double linf() const;
    double linf_diff(const GridFunction& o) const;
    double l2() const;

    // dual grid spacing pi/L; dual half-width pi*pts/(2L)
    double dual_L() const { return M_PI * double(pts) / (2.0 * L); }
};

enum class TransformDir { Forward, Inverse };
enum class OperatorVariant { A, Atilde };

// F_phi u(xi) = int e^{-i y xi} u(y) phi_hat(eps y) dy  (and the inverse with
// e^{+i y xi} and the 1/(2 pi)^n normalization); output lives on the dual grid
GridFunction cf_transform(const GridFunction& u, const Mollifier& phi, TransformDir dir);

// Op(a)u(x) = int e^{i x xi} a(x, xi) (u phi_hat_eps)^(xi) dxi / (2 pi)^n;
// Atilde multiplies the integrand by phi_hat(eps xi) as well
GridFunction apply_operator(const SymbolExpr& a0, const GridFunction& u, const Mollifier& phi,
                            OperatorVariant variant = OperatorVariant::A);

// same action for a numerically given symbol (parametrix sums etc.)
GridFunction apply_operator_fn(const std::function<complexd(Span, double)>& a0, int n,
                               const GridFunction& u, const Mollifier& phi,
                               OperatorVariant variant = OperatorVariant::A);

// binary grid I/O: little-endian float32 (re,im) pairs plus a JSON sidecar
void save_grid(const GridFunction& g, const std::string& bin_path,
               const std::string& sidecar_path);
GridFunction load_grid(const std::string& bin_path, const std::string& sidecar_path);

}  // namespace psido
