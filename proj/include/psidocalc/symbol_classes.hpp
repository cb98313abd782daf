// Sampling-based membership checks for the weighted symbol classes: the
// uniform-N (regular) and per-alpha-N estimates, negligible symbols,
// smoothing symbols via the rapid-decrease characterization, amplitude
// classes with the lambda envelope, and the asymptotic-sum constructor.
//
// Membership on an unbounded phase space is not computable; the falsifiable
// surrogate is constant stability: a constant that stays put when the sample
// box doubles (and when eps shrinks) is accepted, drift of 10-25% returns
// Inconclusive, more returns NotMember.
#pragma once

#include "psidocalc/sampling.hpp"

#include <optional>

namespace psido {

enum class Verdict { Member, NotMember, Inconclusive };
std::string verdict_str(Verdict v);

enum class NMode { UniformN, PerAlphaN };

struct ClassEstimate {
    double m = 0, rho = 1;
    int N = 0;
    Verdict verdict = Verdict::Inconclusive;
    std::map<Multi, double> constants;   // c_alpha on the doubled box
    std::map<Multi, double> box_ratio;   // constant growth under box doubling
    std::map<Multi, double> eps_slope;   // growth exponent of c_alpha(eps)
    std::map<Multi, int> per_alpha_N;    // PerAlphaN mode
    std::optional<double> mprime;        // amplitude checks
    bool exact_shortcut = false;
    std::string note;
    SampleSpec spec;
};

ClassEstimate check_class(const SymbolHandle& a, const WeightFunction& w, double m, double rho,
                          int N, int alpha_max, const SampleSpec& spec,
                          NMode mode = NMode::UniformN);

ClassEstimate check_negligible(const SymbolHandle& a, const WeightFunction& w, double m,
                               double rho, int q_max, const SampleSpec& spec, int alpha_max = 2);

// weight-independent rapid-decrease characterization of smoothing symbols;
// when N is not supplied it is estimated from the eps-slopes
ClassEstimate check_smoothing(const SymbolHandle& a, const SampleSpec& spec, int alpha_max = 4,
                              std::optional<int> N = {});

ClassEstimate check_amplitude(const SymbolHandle& a, const WeightFunction& w, double m,
                              std::optional<double> mprime, double rho, int N, int alpha_max,
                              const SampleSpec& spec);

// ---- formal series and asymptotic sums -------------------------------------

struct AsymptoticSeries {
    struct Term {
        SymbolExpr sym;
        double order = 0;                          // m_j
        std::optional<std::map<Multi, double>> constants;  // c_{j,gamma}, |gamma| <= j
    };
    std::vector<Term> terms;
    double m = 0, rho = 1;
    int N = 0;
    bool monotone = true;
    bool exact = false;  // expansion terminated by itself (polynomial data)

    SymbolExpr total() const;  // plain sum of the stored terms
};

// the summed symbol  a_eps(z) = sum_j psi(lambda_j Lambda(z)) a_j(z,eps);
// locally finite since lambda_j decreases
struct AsymptoticSum {
    std::vector<SymbolExpr> terms;
    std::vector<double> lambda;
    WeightPtr weight;
    complexd eval(Span z, double eps) const;
    std::function<complexd(Span, double)> fn() const;
};

// fills missing term constants with check_class runs at each term's order
void estimate_series_constants(AsymptoticSeries& s, const WeightFunction& w,
                               const SampleSpec& spec, int alpha_cap = 3);

// lambda_schedule_scale shrinks every lambda_j (used to produce a second,
// equally valid representative for the uniqueness test)
AsymptoticSum asymptotic_sum(AsymptoticSeries& s, const WeightPtr& w, const SampleSpec& spec,
                             double lambda_schedule_scale = 1.0);

}  // namespace psido
