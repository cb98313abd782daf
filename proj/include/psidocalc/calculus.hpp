// The expansion calculus: theta-symbols of amplitude operators, change of
// theta, composition of 0-symbols, hypoellipticity certification, and the
// parametrix recursion. For polynomial data every expansion here terminates
// and is computed exactly.
#pragma once

#include "psidocalc/symbol_classes.hpp"

namespace psido {

struct ThetaSymbol {
    std::vector<Rational> theta;   // n entries
    AsymptoticSeries expansion;    // term j collects |beta+gamma| = j
    bool exact = false;            // finite expansion (polynomial amplitude)
    SymbolExpr source;             // the amplitude this came from
    SymbolExpr total() const { return expansion.total(); }
};

// restriction y := x, Amplitude space -> Symbol space
SymbolExpr restrict_y_to_x(const SymbolExpr& amplitude);

// b_theta ~ sum ((-1)^|beta| / (beta! gamma!)) theta^beta (1-theta)^gamma
//           (d_xi^{beta+gamma} D_x^beta D_y^gamma a)|_{y=x}
ThetaSymbol theta_symbol(const AmplitudeExpr& a, const std::vector<Rational>& theta,
                         std::optional<int> K = {});

// b_{theta2} ~ sum (1/alpha!) (theta1-theta2)^alpha d_xi^alpha D_x^alpha b_{theta1}
ThetaSymbol change_theta(const ThetaSymbol& b, const std::vector<Rational>& theta2,
                         std::optional<int> K = {});

// composition of 0-symbols: term_j = sum_{|alpha|=j} (1/alpha!) d_xi^alpha b1 . D_x^alpha b2
AsymptoticSeries compose(const SymbolExpr& b1, const SymbolExpr& b2, std::optional<int> K = {},
                         double rho = 1.0);

// ---- hypoellipticity and parametrices --------------------------------------

struct HypoCertificate {
    enum class Result { Hypoelliptic, Elliptic, Fail };
    Result verdict = Result::Fail;
    double l = 0, m = 0, R = 0, rho = 1;
    int N = 0;
    double lower_constant = 0;                 // c in the lower bound
    std::map<Multi, double> derivative_constants;
    WeightPtr weight;
    std::string fail_reason;
    VecD witness;  // point violating the lower bound, when verdict == Fail
    bool ok() const { return verdict != Result::Fail; }
    std::string verdict_str() const;
};

struct CertifySpec {
    double r_max = 40.0;   // radial sampling reaches out to here
    int n_radii = 14;
    int n_dirs = 24;
    int eps_j_lo = 1;
    int eps_j_hi = 10;
    int gamma_max = 3;
    uint64_t seed = 0;
};

// reads the eps^N lower-bound factor off the coefficient nets; exposed for
// reporting
int lower_bound_exponent(const SymbolExpr& a);

HypoCertificate certify_hypoelliptic(const SymbolExpr& a, const WeightPtr& w, double l, double R,
                                     const CertifySpec& spec = {});

// a + eps^{N+N'} b  (Prop-style stability); b must carry a claimed class with
// order below cert.l
SymbolExpr perturb_hypoelliptic(const SymbolExpr& a, const HypoCertificate& cert,
                                const SymbolExpr& b);

enum class ParametrixSide { Left, Right };

struct Parametrix {
    std::vector<SymbolExpr> terms;  // p_0 .. p_K, cutoff at R baked in
    int K = 0;
    double R = 0;
    ParametrixSide side = ParametrixSide::Left;
    SymbolExpr source;
    SymbolExpr composed_residual;  // truncated composition minus 1
    HypoCertificate certificate;
    SymbolExpr sum() const;
};

// requires a polynomial symbol and a passing certificate; terms are exact
// rational expressions with denominator powers of a
Parametrix parametrix(const SymbolExpr& a, const HypoCertificate& cert, int K,
                      ParametrixSide side = ParametrixSide::Left);

}  // namespace psido
