// Closed-form eps-nets: finite sums  sum_j c_j * eps^(p_j) * negl^(k_j)
// where negl = exp(-1/eps). These stand in for nets of generalized complex
// numbers; moderateness / negligibility can be decided exactly from the
// term structure, or estimated from magnitude samples on an eps-grid.
#pragma once

#include "psidocalc/common.hpp"
#include "psidocalc/rational.hpp"

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace psido {

enum class NetClass { Moderate, Negligible, NotModerate };

struct NetVerdict {
    NetClass kind = NetClass::Moderate;
    int N = 0;  // meaningful for Moderate only
    bool operator==(const NetVerdict& o) const {
        return kind == o.kind && (kind != NetClass::Moderate || N == o.N);
    }
    std::string str() const;
};

struct NetTerm {
    GaussianRational coeff;
    Rational eps_power;
    unsigned negligible_factor = 0;
};

class NetExpr {
public:
    // key (p, k); normal form keeps distinct keys and no zero coefficients
    using Key = std::pair<Rational, unsigned>;

    NetExpr() = default;

    static NetExpr zero() { return NetExpr(); }
    static NetExpr one() { return constant(GaussianRational(1)); }
    static NetExpr constant(const GaussianRational& c);
    static NetExpr term(const GaussianRational& c, const Rational& p, unsigned k = 0);
    static NetExpr eps_power(const Rational& p) { return term(GaussianRational(1), p, 0); }
    static NetExpr negligible_unit(unsigned k = 1) { return term(GaussianRational(1), Rational(0), k); }

    bool is_zero() const { return terms_.empty(); }
    bool is_one() const;
    // constant means a single term with p == 0, k == 0 (or zero)
    std::optional<GaussianRational> as_constant() const;
    std::optional<NetTerm> as_single_term() const;

    NetExpr operator+(const NetExpr& o) const;
    NetExpr operator-(const NetExpr& o) const;
    NetExpr operator*(const NetExpr& o) const;
    NetExpr operator-() const;
    NetExpr scaled(const GaussianRational& c) const;
    NetExpr divided_by(const GaussianRational& c) const { return scaled(c.inverse()); }
    // exact inverse, defined for single-term nets only
    NetExpr inverse_single_term() const;

    bool operator==(const NetExpr& o) const { return terms_ == o.terms_; }
    bool operator<(const NetExpr& o) const { return terms_ < o.terms_; }

    complexd eval(double eps) const;

    NetVerdict classify() const;
    bool all_terms_negligible() const;

    const std::map<Key, GaussianRational>& terms() const { return terms_; }

    std::string str() const;
    static NetExpr parse(const std::string& text);

private:
    std::map<Key, GaussianRational> terms_;
    void insert(const Key& k, const GaussianRational& c);
    friend class NetBuilder;
};

// classify_net in the spec's terms; NotModerate never arises for NetExpr
inline NetVerdict classify_net(const NetExpr& n) { return n.classify(); }

// a generalized complex number carried by one explicit representative;
// no coset normal form exists or is attempted
struct GeneralizedNumber {
    NetExpr representative;
    NetVerdict classification;

    GeneralizedNumber() : classification(NetExpr().classify()) {}
    explicit GeneralizedNumber(NetExpr rep)
        : representative(std::move(rep)), classification(representative.classify()) {}

    GeneralizedNumber operator+(const GeneralizedNumber& o) const {
        return GeneralizedNumber(representative + o.representative);
    }
    GeneralizedNumber operator*(const GeneralizedNumber& o) const {
        return GeneralizedNumber(representative * o.representative);
    }
    complexd eval(double eps) const { return representative.eval(eps); }
};

NetExpr net_arith(const NetExpr& a, const NetExpr& b, char op);  // '+', '*'

// ---- sampled-net classification -------------------------------------------

struct ExponentOptions {
    int q_max = 10;              // negligibility is tested up to eps^q_max
    double conv_threshold = 2.0; // successive-slope growth that flags NotModerate
    double round_band = 0.15;    // |slope - round(slope)| within this snaps to the integer
    double negligible_margin = 0.5;
    size_t min_samples = 8;
    bool lenient = false;        // accept < 8 nonzero samples (internal users)
    double zero_floor = 0.0;     // magnitudes <= floor are treated as exact zeros
};

struct ExponentEstimate {
    double slope = 0.0;
    NetVerdict verdict;
    std::vector<double> successive_slopes;
    size_t used_samples = 0;
    bool all_zero = false;
};

// samples: (eps, magnitude) on a decreasing geometric eps-grid
ExponentEstimate estimate_exponent(const std::vector<std::pair<double, double>>& samples,
                                   const ExponentOptions& opt = {});

// the standard eps-grid 2^-j, j = j_lo..j_hi
std::vector<double> standard_eps_grid(int j_lo = 1, int j_hi = 20);

}  // namespace psido
