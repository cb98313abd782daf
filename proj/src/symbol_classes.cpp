#include "psidocalc/symbol_classes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace psido {

std::string verdict_str(Verdict v) {
    switch (v) {
        case Verdict::Member: return "Member";
        case Verdict::NotMember: return "NotMember";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

namespace {

constexpr double kStableRatio = 1.10;
constexpr double kRejectRatio = 1.25;
constexpr double kEpsSlopeTol = 0.15;
constexpr double kTiny = 1e-290;

// sup over points of |value| * envelope at each eps; exact handles get a
// compiled derivative per (alpha, eps)
struct SupTable {
    std::vector<double> per_eps;  // sup over z at each eps
    double overall = 0.0;
};

template <typename EnvelopeFn>
SupTable sup_over_samples(const SymbolHandle& a, const Multi& alpha,
                          const std::vector<VecD>& pts, const std::vector<double>& eps_grid,
                          const EnvelopeFn& env) {
    SupTable t;
    t.per_eps.assign(eps_grid.size(), 0.0);
    const bool exact = a.exact();
    for (size_t ei = 0; ei < eps_grid.size(); ++ei) {
        double eps = eps_grid[ei];
        double s = 0.0;
        if (exact) {
            CompiledSymbol cs(a.deriv_expr(alpha), eps);
            for (const auto& z : pts) s = std::max(s, std::abs(cs.eval(z)) * env(z));
        } else {
            for (const auto& z : pts) s = std::max(s, std::abs(a.eval_deriv(alpha, z, eps)) * env(z));
        }
        t.per_eps[ei] = s;
        t.overall = std::max(t.overall, s);
    }
    return t;
}

double eps_growth_slope(const std::vector<double>& eps_grid, const std::vector<double>& sups) {
    std::vector<double> xs, ys;
    for (size_t i = 0; i < eps_grid.size(); ++i) {
        if (sups[i] > kTiny) {
            xs.push_back(-std::log(eps_grid[i]));
            ys.push_back(std::log(sups[i]));
        }
    }
    if (xs.size() < 3) return 0.0;
    return ls_slope(xs, ys);
}

Verdict combine(Verdict a, Verdict b) {
    if (a == Verdict::NotMember || b == Verdict::NotMember) return Verdict::NotMember;
    if (a == Verdict::Inconclusive || b == Verdict::Inconclusive) return Verdict::Inconclusive;
    return Verdict::Member;
}

Verdict judge(double c_small, double c_big, double slope, double slope_tol) {
    if (c_big <= kTiny && c_small <= kTiny) return Verdict::Member;
    double ratio = c_big / std::max(c_small, kTiny);
    Verdict v = Verdict::Member;
    if (ratio > kRejectRatio) v = Verdict::NotMember;
    else if (ratio > kStableRatio) v = Verdict::Inconclusive;
    if (slope > slope_tol + 0.35) v = Verdict::NotMember;
    else if (slope > slope_tol) v = combine(v, Verdict::Inconclusive);
    return v;
}

double cutoff_exclusion(const SymbolHandle& a) {
    if (!a.exact()) return 0.0;
    double r = 0.0;
    for (const auto& p : a.expr().parts())
        if (p.cutoff_radius()) r = std::max(r, 2.02 * *p.cutoff_radius());
    return r;
}

}  // namespace

ClassEstimate check_class(const SymbolHandle& a, const WeightFunction& w, double m, double rho,
                          int N, int alpha_max, const SampleSpec& spec_in, NMode mode) {
    if (alpha_max < 2) throw std::invalid_argument("check_class: alpha_max must be >= 2");
    if (a.space() != VarSpace::Symbol)
        throw std::invalid_argument("check_class: symbol-space expression expected");
    SampleSpec spec = spec_in;
    spec.exclude_radius = std::max(spec.exclude_radius, cutoff_exclusion(a));

    ClassEstimate est;
    est.m = m;
    est.rho = rho;
    est.N = N;
    est.spec = spec;
    est.verdict = Verdict::Member;

    auto eps_grid = spec.eps_grid();
    auto pts_small = sample_points(spec, a.nvars(), true);
    auto pts_big = sample_points(spec.doubled_box(), a.nvars(), true);

    for (const auto& alpha : multis_up_to(a.nvars(), alpha_max)) {
        double ord = double(multi_order(alpha));
        auto env = [&](Span z) {
            double lam = w.eval(z);
            return std::pow(lam, rho * ord - m);
        };
        SupTable small = sup_over_samples(a, alpha, pts_small, eps_grid, env);
        SupTable big = sup_over_samples(a, alpha, pts_big, eps_grid, env);
        // fold the eps^N factor in
        double c_small = 0, c_big = 0;
        std::vector<double> sups(eps_grid.size());
        for (size_t i = 0; i < eps_grid.size(); ++i) {
            double f = mode == NMode::UniformN ? std::pow(eps_grid[i], double(N)) : 1.0;
            c_small = std::max(c_small, small.per_eps[i] * f);
            sups[i] = big.per_eps[i] * f;
            c_big = std::max(c_big, sups[i]);
        }
        double slope = eps_growth_slope(eps_grid, sups);
        est.constants[alpha] = c_big;
        est.box_ratio[alpha] = c_big / std::max(c_small, kTiny);
        est.eps_slope[alpha] = slope;

        if (mode == NMode::PerAlphaN) {
            int Na = int(std::max(0.0, std::ceil(slope - 0.1)));
            est.per_alpha_N[alpha] = Na;
            est.verdict = combine(est.verdict, judge(c_small, c_big, 0.0, 1e9));
        } else {
            est.verdict = combine(est.verdict, judge(c_small, c_big, slope, kEpsSlopeTol));
        }
    }
    return est;
}

ClassEstimate check_negligible(const SymbolHandle& a, const WeightFunction& w, double m,
                               double rho, int q_max, const SampleSpec& spec_in, int alpha_max) {
    SampleSpec spec = spec_in;
    spec.exclude_radius = std::max(spec.exclude_radius, cutoff_exclusion(a));
    ClassEstimate est;
    est.m = m;
    est.rho = rho;
    est.spec = spec;
    est.verdict = Verdict::Member;

    if (a.exact() && a.expr().all_coeffs_negligible()) {
        est.exact_shortcut = true;
        est.note = "all coefficient nets negligible";
        return est;
    }

    auto eps_grid = spec.eps_grid();
    auto pts_small = sample_points(spec, a.nvars(), true);
    auto pts_big = sample_points(spec.doubled_box(), a.nvars(), true);

    for (const auto& alpha : multis_up_to(a.nvars(), alpha_max)) {
        double ord = double(multi_order(alpha));
        auto env = [&](Span z) { return std::pow(w.eval(z), rho * ord - m); };
        SupTable small = sup_over_samples(a, alpha, pts_small, eps_grid, env);
        SupTable big = sup_over_samples(a, alpha, pts_big, eps_grid, env);
        double slope = eps_growth_slope(eps_grid, big.per_eps);
        est.constants[alpha] = big.overall;
        est.box_ratio[alpha] = big.overall / std::max(small.overall, kTiny);
        est.eps_slope[alpha] = slope;
        bool all_zero = big.overall <= kTiny && small.overall <= kTiny;
        // sup * eps^{-q} must stay bounded for every q <= q_max, i.e. the
        // sups must decay at least like eps^{q_max}
        Verdict v = Verdict::Member;
        if (!all_zero) {
            if (slope > -double(q_max) + 0.1) {
                v = Verdict::NotMember;
                est.note = "fails at q = " + std::to_string(q_max);
            }
            double ratio = big.overall / std::max(small.overall, kTiny);
            if (ratio > kRejectRatio) v = Verdict::NotMember;
            else if (ratio > kStableRatio) v = combine(v, Verdict::Inconclusive);
        }
        est.verdict = combine(est.verdict, v);
    }
    return est;
}

ClassEstimate check_smoothing(const SymbolHandle& a, const SampleSpec& spec_in, int alpha_max,
                              std::optional<int> N) {
    SampleSpec spec = spec_in;
    spec.exclude_radius = std::max(spec.exclude_radius, cutoff_exclusion(a));
    ClassEstimate est;
    est.spec = spec;
    est.verdict = Verdict::Member;

    if (a.exact() && a.expr().all_coeffs_negligible()) {
        est.exact_shortcut = true;
        est.note = "all coefficient nets negligible (negligible of every order)";
        return est;
    }

    auto eps_grid = spec.eps_grid();
    auto pts_small = sample_points(spec, a.nvars(), true);
    auto pts_big = sample_points(spec.doubled_box(), a.nvars(), true);

    int dim = a.nvars();
    int worst_N = 0;
    for (int total = 0; total <= alpha_max; ++total) {
        for (int da = 0; da <= total; ++da) {
            // z^alpha weights of order da, derivative order total - da
            for (const auto& zalpha : multis_of_order(dim, da)) {
                for (const auto& beta : multis_of_order(dim, total - da)) {
                    auto env = [&](Span z) {
                        double p = 1.0;
                        for (size_t i = 0; i < zalpha.size(); ++i)
                            for (unsigned k = 0; k < zalpha[i]; ++k) p *= z[i];
                        return std::abs(p);
                    };
                    SupTable small = sup_over_samples(a, beta, pts_small, eps_grid, env);
                    SupTable big = sup_over_samples(a, beta, pts_big, eps_grid, env);
                    double slope = eps_growth_slope(eps_grid, big.per_eps);
                    // record under a combined index (z-powers then derivative)
                    Multi key = zalpha;
                    key.insert(key.end(), beta.begin(), beta.end());
                    double cN = 0, cN_small = 0;
                    for (size_t i = 0; i < eps_grid.size(); ++i) {
                        double f = N ? std::pow(eps_grid[i], double(*N)) : 1.0;
                        cN = std::max(cN, big.per_eps[i] * f);
                        cN_small = std::max(cN_small, small.per_eps[i] * f);
                    }
                    est.constants[key] = cN;
                    est.box_ratio[key] = cN / std::max(cN_small, kTiny);
                    est.eps_slope[key] = slope;
                    double slope_tol = N ? double(*N) + kEpsSlopeTol : 1e9;
                    est.verdict = combine(est.verdict, judge(cN_small, cN, slope, slope_tol));
                    worst_N = std::max(worst_N, int(std::max(0.0, std::ceil(slope - 0.1))));
                }
            }
        }
    }
    est.N = N ? *N : worst_N;
    return est;
}

ClassEstimate check_amplitude(const SymbolHandle& a, const WeightFunction& w, double m,
                              std::optional<double> mprime, double rho, int N, int alpha_max,
                              const SampleSpec& spec_in) {
    if (a.space() != VarSpace::Amplitude)
        throw std::invalid_argument("check_amplitude: amplitude-space expression expected");
    SampleSpec spec = spec_in;
    ClassEstimate best;
    std::vector<double> candidates;
    if (mprime) candidates = {*mprime};
    else candidates = {0, 1, 2, 3, 4};

    const int n = a.dim_n();
    auto eps_grid = spec.eps_grid();
    auto pts_small = sample_points(spec, a.nvars(), false);
    auto pts_big = sample_points(spec.doubled_box(), a.nvars(), false);

    for (double mp : candidates) {
        ClassEstimate est;
        est.m = m;
        est.rho = rho;
        est.N = N;
        est.mprime = mp;
        est.spec = spec;
        est.verdict = Verdict::Member;
        for (const auto& alpha : multis_up_to(a.nvars(), alpha_max)) {
            unsigned j = multi_order(alpha);
            auto env = [&](Span z) {
                Span x = z.subspan(0, size_t(n));
                Span y = z.subspan(size_t(n), size_t(n));
                Span xi = z.subspan(size_t(2 * n), size_t(n));
                return 1.0 / amplitude_envelope(w, m, mp, rho, j, x, y, xi);
            };
            SupTable small = sup_over_samples(a, alpha, pts_small, eps_grid, env);
            SupTable big = sup_over_samples(a, alpha, pts_big, eps_grid, env);
            double c_small = 0, c_big = 0;
            std::vector<double> sups(eps_grid.size());
            for (size_t i = 0; i < eps_grid.size(); ++i) {
                double f = std::pow(eps_grid[i], double(N));
                c_small = std::max(c_small, small.per_eps[i] * f);
                sups[i] = big.per_eps[i] * f;
                c_big = std::max(c_big, sups[i]);
            }
            double slope = eps_growth_slope(eps_grid, sups);
            est.constants[alpha] = c_big;
            est.box_ratio[alpha] = c_big / std::max(c_small, kTiny);
            est.eps_slope[alpha] = slope;
            est.verdict = combine(est.verdict, judge(c_small, c_big, slope, kEpsSlopeTol));
        }
        if (est.verdict == Verdict::Member) return est;
        if (best.constants.empty()) best = est;
    }
    return best;
}

// ---------------------------------------------------------------------------

SymbolExpr AsymptoticSeries::total() const {
    if (terms.empty()) throw std::logic_error("asymptotic series: no terms");
    SymbolExpr s = terms[0].sym;
    for (size_t i = 1; i < terms.size(); ++i) s = s + terms[i].sym;
    return s;
}

complexd AsymptoticSum::eval(Span z, double eps) const {
    double lamz = weight->eval(z);
    complexd s = 0.0;
    for (size_t j = 0; j < terms.size(); ++j) {
        double t = lambda[j] * lamz;
        if (t <= 1.0) break;  // lambda decreases: all later terms vanish too
        s += cutoff_psi(t) * terms[j].eval(z, eps);
    }
    return s;
}

std::function<complexd(Span, double)> AsymptoticSum::fn() const {
    AsymptoticSum copy = *this;
    return [copy](Span z, double eps) { return copy.eval(z, eps); };
}

void estimate_series_constants(AsymptoticSeries& s, const WeightFunction& w,
                               const SampleSpec& spec, int alpha_cap) {
    for (size_t j = 0; j < s.terms.size(); ++j) {
        auto& t = s.terms[j];
        if (t.constants) continue;
        int amax = std::max(2, std::min(int(j), alpha_cap));
        SymbolHandle h(t.sym);
        auto est = check_class(h, w, t.order, s.rho, s.N, amax, spec);
        t.constants = est.constants;
    }
}

AsymptoticSum asymptotic_sum(AsymptoticSeries& s, const WeightPtr& w, const SampleSpec& spec,
                             double lambda_schedule_scale) {
    if (!w) throw std::invalid_argument("asymptotic_sum: weight required");
    if (lambda_schedule_scale <= 0 || lambda_schedule_scale > 1)
        throw std::invalid_argument("asymptotic_sum: schedule scale must lie in (0,1]");
    estimate_series_constants(s, *w, spec);
    AsymptoticSum sum;
    sum.weight = w;
    double prev = 2.0;
    for (size_t j = 0; j < s.terms.size(); ++j) {
        const auto& t = s.terms[j];
        if (!t.constants) throw std::logic_error("asymptotic_sum: missing constants");
        double cmax = 0.0;
        for (const auto& [al, c] : *t.constants)
            if (multi_order(al) <= j) cmax = std::max(cmax, c);
        double lam = prev / 2.0;
        if (cmax > 0) lam = std::min(lam, std::pow(2.0, -double(j)) / cmax);
        lam = std::min(lam, 1.0) * lambda_schedule_scale;
        sum.terms.push_back(t.sym);
        sum.lambda.push_back(lam);
        prev = lam;
    }
    return sum;
}

}  // namespace psido
