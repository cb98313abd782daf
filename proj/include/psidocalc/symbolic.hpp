// Rational functions num / prod(base_i^k_i) with NetExpr-free denominators,
// plus the radial cutoff flag used by p0 and parametrix terms: the cutoff
// psi(|z|/R) is never expanded into the rational function; it multiplies
// values at evaluation time and is exact outside the annulus R <= |z| <= 2R.
// A SymbolExpr is a finite sum of such parts (parts keep distinct cutoffs)
// together with an optional claimed symbol class.
#pragma once

#include "psidocalc/mollifier.hpp"
#include "psidocalc/poly.hpp"
#include "psidocalc/weights.hpp"

#include <map>
#include <optional>

namespace psido {

class RationalExpr {
public:
    RationalExpr() = default;
    explicit RationalExpr(PolyExpr p) : num_(std::move(p)) {}

    // 1 / p, with p = (single-term net scalar) * (NetExpr-free polynomial);
    // throws if p cannot be written that way
    static RationalExpr reciprocal(const PolyExpr& p, std::optional<double> cutoff_radius = {});

    const PolyExpr& num() const { return num_; }
    const std::map<PolyExpr, int, PolyLess>& den() const { return den_; }
    std::optional<double> cutoff_radius() const { return cutoff_; }
    void set_cutoff(std::optional<double> R) { cutoff_ = R; }
    // the part carries (psi - 1) instead of psi: exactly zero beyond 2R,
    // exactly -1 inside R; parametrix residuals use it to avoid forming
    // 1 - 1 at evaluation time
    bool cutoff_deficit() const { return deficit_; }
    void set_cutoff_deficit(double R) {
        cutoff_ = R;
        deficit_ = true;
    }

    bool is_polynomial() const { return den_.empty(); }
    bool is_zero() const { return num_.is_zero(); }
    int dim_n() const { return num_.dim_n(); }
    VarSpace space() const { return num_.space(); }
    int nvars() const { return num_.nvars(); }

    RationalExpr operator*(const RationalExpr& o) const;
    RationalExpr operator-() const;
    RationalExpr scaled(const NetExpr& c) const;
    // addition requires identical cutoff flags (SymbolExpr handles the rest)
    std::optional<RationalExpr> try_add(const RationalExpr& o) const;

    RationalExpr differentiate(int var, unsigned order = 1, bool d_normalized = false) const;
    RationalExpr differentiate_multi(const Multi& alpha, bool d_normalized = false) const;

    complexd eval(Span z, double eps) const;

    PolyExpr den_expanded() const;
    bool equals(const RationalExpr& o) const;

    std::string str() const;

private:
    PolyExpr num_;
    std::map<PolyExpr, int, PolyLess> den_;  // monic NetExpr-free factors
    std::optional<double> cutoff_ = {};
    bool deficit_ = false;
    void normalize();
};

struct ClaimedClass {
    double m = 0.0;
    double rho = 1.0;
    int N = 0;
    WeightPtr weight;
};

class SymbolExpr {
public:
    SymbolExpr() = default;
    SymbolExpr(int n, VarSpace space) : n_(n), space_(space) {}
    explicit SymbolExpr(PolyExpr p);
    explicit SymbolExpr(RationalExpr r);

    static SymbolExpr zero(int n, VarSpace space) { return SymbolExpr(n, space); }
    static SymbolExpr one(int n, VarSpace space) {
        return SymbolExpr(PolyExpr::constant(n, space, NetExpr::one()));
    }

    int dim_n() const { return n_; }
    VarSpace space() const { return space_; }
    int nvars() const { return space_ == VarSpace::Symbol ? 2 * n_ : 3 * n_; }
    bool is_zero() const;
    bool is_polynomial() const;
    PolyExpr as_poly() const;  // throws unless polynomial

    const std::vector<RationalExpr>& parts() const { return parts_; }

    SymbolExpr operator+(const SymbolExpr& o) const;
    SymbolExpr operator-(const SymbolExpr& o) const;
    SymbolExpr operator*(const SymbolExpr& o) const;
    SymbolExpr operator-() const;
    SymbolExpr scaled(const NetExpr& c) const;

    SymbolExpr differentiate_multi(const Multi& alpha, bool d_normalized = false) const;

    complexd eval(Span z, double eps) const;

    // exact equality via pairwise part subtraction; intended for tests on
    // polynomial or single-part symbols
    bool equals(const SymbolExpr& o) const;

    std::optional<ClaimedClass> claimed;
    // every coefficient net negligible (exact shortcut used by class checks)
    bool all_coeffs_negligible() const;

    std::string str() const;

    void add_part(RationalExpr r);

private:
    int n_ = 1;
    VarSpace space_ = VarSpace::Symbol;
    std::vector<RationalExpr> parts_;
};

using AmplitudeExpr = SymbolExpr;  // space() == VarSpace::Amplitude

// fast repeated evaluation at fixed eps
class CompiledSymbol {
public:
    CompiledSymbol() = default;
    CompiledSymbol(const SymbolExpr& s, double eps);
    complexd eval(Span z) const;

private:
    struct Part {
        CompiledPoly num;
        std::vector<std::pair<CompiledPoly, int>> den;
        std::optional<double> cutoff;
        bool deficit = false;
    };
    std::vector<Part> parts_;
};

}  // namespace psido
