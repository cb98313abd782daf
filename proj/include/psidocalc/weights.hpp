// Weight functions Lambda(z) on R^{2n}: the Japanese bracket <z>, the
// quasi-homogeneous polyhedron weights (1 + sum z_j^{2M_j})^{1/(2 mu)},
// and general Newton-polyhedron weights built from a vertex set. Also the
// sampling-based verification of the weight-function properties and the
// power envelopes used by symbol and amplitude class checks.
#pragma once

#include "psidocalc/common.hpp"
#include "psidocalc/rational.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace psido {

class WeightFunction {
public:
    enum class Kind { JapaneseBracket, QuasiHomogeneous, Polyhedron };

    static WeightFunction japanese_bracket(int n);
    // M has 2n positive entries; Lambda = (1 + sum z_j^{2 M_j})^{1/(2 mu)}, mu = max M_j
    static WeightFunction quasi_homogeneous(int n, std::vector<int> M);
    // Lambda = (sum_{gamma in V} z^{2 gamma})^{1/(2 mu)}; mu is the polyhedron's
    // formal order, supplied by the caller
    static WeightFunction polyhedron(int n, std::vector<std::vector<Rational>> vertices,
                                     Rational mu_formal);

    double eval(Span z) const;
    double partial(int j, Span z) const;  // d Lambda / d z_j

    int dim_n() const { return n_; }
    int dim2n() const { return 2 * n_; }
    Kind kind() const { return kind_; }
    double mu() const { return mu_; }                    // <z>^mu << Lambda << <z>
    double formal_order() const { return formal_order_; }
    // shallow structural completeness check for polyhedron vertex sets
    bool structure_ok() const { return structure_ok_; }

    std::string json_spec() const;
    static WeightFunction from_json(const std::string& spec, int default_n = 1);

    std::string describe() const;

private:
    WeightFunction() = default;
    int n_ = 1;
    Kind kind_ = Kind::JapaneseBracket;
    std::vector<int> M_;
    std::vector<std::vector<Rational>> vertices_;
    std::vector<std::vector<double>> vert_d_;  // doubled exponents, as doubles
    double mu_ = 1.0;
    double formal_order_ = 1.0;
    bool structure_ok_ = true;
};

using WeightPtr = std::shared_ptr<const WeightFunction>;

// A weight-like function to be checked (check_weight also accepts synthetic
// non-weights in tests).
struct WeightProbe {
    int dim2n = 2;
    std::function<double(Span)> eval;
};

inline WeightProbe probe(const WeightFunction& w) {
    return {w.dim2n(), [&w](Span z) { return w.eval(z); }};
}

struct WeightCheckReport {
    double temperance_constant = 0;      // best c in Lambda(z) <= c Lambda(zeta) <z - zeta>
    double slow_variation_constant = 0;  // property ii constant on |zeta - z| <= mu Lambda(z)
    double anisotropy_constant = 0;      // property iii constant for t in [-1,1]^{2n}
    double box_L = 0;
    int n_samples = 0;
    bool pass_temperance = false;
    bool pass_slow_variation = false;
    bool pass_anisotropy = false;
    // constant growth under box doubling (a genuine weight stays near 1)
    double temperance_box_growth = 1.0;
    bool pass() const { return pass_temperance && pass_slow_variation && pass_anisotropy; }
};

WeightCheckReport check_weight(const WeightProbe& w, double box_L, int n_samples,
                               double mu_hint = 1.0, uint64_t seed = 0);

// Lambda(zeta)^s <z-zeta>^|s| for s >= 0, (1 + Lambda(zeta) <z-zeta>^{-1})^s for s < 0
double weight_power_envelope(const WeightFunction& w, double s, Span z, Span zeta);

// the three-variable amplitude envelope
//   Lambda(x,xi)^m <x-y>^{m'} (1 + Lambda(x,xi) <x-y>^{-m'})^{-rho j}
double amplitude_envelope(const WeightFunction& w, double m, double mprime, double rho,
                          unsigned j, Span x, Span y, Span xi);

}  // namespace psido
