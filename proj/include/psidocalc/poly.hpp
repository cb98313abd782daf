// Exact multivariate polynomials over NetExpr coefficients (Gaussian
// rationals scaled by eps-nets). Two variable layouts are used: Symbol
// space (x_1..x_n, xi_1..xi_n) and Amplitude space (x, y, xi blocks).
#pragma once

#include "psidocalc/common.hpp"
#include "psidocalc/nets.hpp"
#include "psidocalc/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace psido {

using Monomial = std::vector<unsigned>;

struct GradedLex {
    bool operator()(const Monomial& a, const Monomial& b) const {
        unsigned da = 0, db = 0;
        for (unsigned v : a) da += v;
        for (unsigned v : b) db += v;
        if (da != db) return da < db;
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    }
};

enum class VarSpace { Symbol, Amplitude };

class PolyExpr {
public:
    PolyExpr() = default;
    PolyExpr(int n, VarSpace space) : n_(n), space_(space) {}

    static PolyExpr constant(int n, VarSpace space, NetExpr c);
    static PolyExpr constant(int n, VarSpace space, const GaussianRational& c) {
        return constant(n, space, NetExpr::constant(c));
    }
    static PolyExpr variable(int n, VarSpace space, int var);
    static PolyExpr monomial(int n, VarSpace space, Monomial e, NetExpr c);

    int dim_n() const { return n_; }
    VarSpace space() const { return space_; }
    int nvars() const { return space_ == VarSpace::Symbol ? 2 * n_ : 3 * n_; }

    // variable index helpers
    int var_x(int i) const { return i; }
    int var_y(int i) const;   // amplitude space only
    int var_xi(int i) const { return space_ == VarSpace::Symbol ? n_ + i : 2 * n_ + i; }

    bool is_zero() const { return mono_.empty(); }
    std::optional<NetExpr> as_constant() const;
    bool is_net_free() const;  // every coefficient is a plain complex rational
    bool has_real_rational_coeffs() const;

    unsigned total_degree() const;
    unsigned degree_in(int var) const;
    unsigned degree_in_xi() const;  // total degree in the xi block

    PolyExpr operator+(const PolyExpr& o) const;
    PolyExpr operator-(const PolyExpr& o) const;
    PolyExpr operator*(const PolyExpr& o) const;
    PolyExpr operator-() const;
    PolyExpr scaled(const NetExpr& c) const;
    PolyExpr scaled(const GaussianRational& c) const { return scaled(NetExpr::constant(c)); }
    PolyExpr pow(unsigned k) const;
    bool operator==(const PolyExpr& o) const { return n_ == o.n_ && space_ == o.space_ && mono_ == o.mono_; }

    // d^order/d var^order; d_normalized applies D = -i d instead
    PolyExpr differentiate(int var, unsigned order = 1, bool d_normalized = false) const;
    PolyExpr differentiate_multi(const Multi& alpha, bool d_normalized = false) const;

    // substitute variable v by images[v]; all images share one target layout
    PolyExpr substitute(const std::vector<PolyExpr>& images) const;

    complexd eval(Span z, double eps) const;

    // exact division by a NetExpr-free divisor; nullopt if not exact
    std::optional<PolyExpr> divide_exact(const PolyExpr& divisor) const;

    // leading coefficient in graded-lex order
    NetExpr leading_coeff() const;

    // single-term eps-net scalar common to every coefficient, if one exists:
    // returns (scalar, net-free remainder) with *this == scalar * remainder
    std::optional<std::pair<NetExpr, PolyExpr>> factor_scalar_net() const;

    const std::map<Monomial, NetExpr, GradedLex>& monomials() const { return mono_; }
    void set_coeff(const Monomial& e, NetExpr c);
    void add_term(const Monomial& e, const NetExpr& c);

    std::string str() const;  // text grammar form

    // total order usable as a map key
    static int cmp(const PolyExpr& a, const PolyExpr& b);

private:
    int n_ = 1;
    VarSpace space_ = VarSpace::Symbol;
    std::map<Monomial, NetExpr, GradedLex> mono_;
    void check_compat(const PolyExpr& o) const;
};

struct PolyLess {
    bool operator()(const PolyExpr& a, const PolyExpr& b) const { return PolyExpr::cmp(a, b) < 0; }
};

// compiled form for fast repeated numeric evaluation at fixed eps
struct CompiledPoly {
    struct Term {
        complexd c;
        Monomial e;
    };
    std::vector<Term> terms;
    complexd eval(Span z) const;
};

CompiledPoly compile_poly(const PolyExpr& p, double eps);

std::string var_name(int n, VarSpace space, int var);

}  // namespace psido
