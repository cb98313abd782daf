#include "psidocalc/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace psido {

namespace {

GaussianRational rational_pow(const Rational& base, unsigned k) {
    Rational acc(1);
    for (unsigned i = 0; i < k; ++i) acc *= base;
    return GaussianRational(acc);
}

GaussianRational theta_power(const std::vector<Rational>& theta, const Multi& beta) {
    GaussianRational acc(Rational(1));
    for (size_t i = 0; i < beta.size(); ++i) acc = acc * rational_pow(theta[i], beta[i]);
    return acc;
}

Rational factorial_rat(unsigned k) {
    Rational f(1);
    for (unsigned i = 2; i <= k; ++i) f *= Rational(i);
    return f;
}

Rational multi_factorial_rat(const Multi& a) {
    Rational f(1);
    for (unsigned v : a) f *= factorial_rat(v);
    return f;
}

}  // namespace

SymbolExpr restrict_y_to_x(const SymbolExpr& amplitude) {
    if (amplitude.space() != VarSpace::Amplitude)
        throw std::invalid_argument("restrict_y_to_x: amplitude-space expression expected");
    const int n = amplitude.dim_n();
    std::vector<PolyExpr> images;
    images.reserve(size_t(3 * n));
    for (int i = 0; i < n; ++i) images.push_back(PolyExpr::variable(n, VarSpace::Symbol, i));
    for (int i = 0; i < n; ++i) images.push_back(PolyExpr::variable(n, VarSpace::Symbol, i));
    for (int i = 0; i < n; ++i) images.push_back(PolyExpr::variable(n, VarSpace::Symbol, n + i));

    SymbolExpr out(n, VarSpace::Symbol);
    for (const auto& part : amplitude.parts()) {
        RationalExpr rp(part.num().substitute(images));
        for (const auto& [b, k] : part.den()) {
            PolyExpr sb = b.substitute(images);
            RationalExpr rec = RationalExpr::reciprocal(sb, {});
            for (int i = 0; i < k; ++i) rp = rp * rec;
        }
        rp.set_cutoff(part.cutoff_radius());
        out.add_part(std::move(rp));
    }
    return out;
}

ThetaSymbol theta_symbol(const AmplitudeExpr& a, const std::vector<Rational>& theta,
                         std::optional<int> K) {
    if (a.space() != VarSpace::Amplitude)
        throw std::invalid_argument("theta_symbol: amplitude-space expression expected");
    const int n = a.dim_n();
    if (int(theta.size()) != n) throw std::invalid_argument("theta_symbol: theta needs n entries");

    bool poly = a.is_polynomial();
    if (!poly && !K)
        throw std::invalid_argument("theta_symbol: truncation order required for non-polynomial amplitudes");

    int j_full = 0;
    if (poly) {
        // d_xi^{beta+gamma} annihilates once |beta+gamma| exceeds the xi-degree
        j_full = int(a.as_poly().degree_in_xi());
    }
    int j_max = poly ? (K ? std::min(j_full, *K) : j_full) : *K;

    std::vector<Rational> one_minus(theta.size());
    for (size_t i = 0; i < theta.size(); ++i) one_minus[i] = Rational(1) - theta[i];

    ThetaSymbol out;
    out.theta = theta;
    out.source = a;
    out.exact = poly && j_max >= j_full;
    out.expansion.rho = 1.0;
    out.expansion.exact = out.exact;

    GaussianRational mi(Rational(0), Rational(-1));  // -i

    for (int j = 0; j <= j_max; ++j) {
        SymbolExpr term(n, VarSpace::Symbol);
        for (int bo = 0; bo <= j; ++bo) {
            for (const auto& beta : multis_of_order(n, bo)) {
                GaussianRational tb = theta_power(theta, beta);
                if (tb.is_zero()) continue;
                for (const auto& gamma : multis_of_order(n, j - bo)) {
                    GaussianRational tg = theta_power(one_minus, gamma);
                    if (tg.is_zero()) continue;
                    // coefficient (-1)^|beta| / (beta! gamma!)
                    GaussianRational coeff = tb * tg;
                    if (bo % 2 == 1) coeff = -coeff;
                    Rational fact = multi_factorial_rat(beta) * multi_factorial_rat(gamma);
                    coeff = coeff * GaussianRational(Rational(1) / fact);
                    // D carries (-i)^{|beta|+|gamma|}
                    coeff = coeff * mi.pow(unsigned(j));

                    Multi full(size_t(3 * n), 0u);
                    for (int i = 0; i < n; ++i) {
                        full[size_t(i)] = beta[size_t(i)];
                        full[size_t(n + i)] = gamma[size_t(i)];
                        full[size_t(2 * n + i)] = beta[size_t(i)] + gamma[size_t(i)];
                    }
                    SymbolExpr d = a.differentiate_multi(full, false);
                    if (d.is_zero()) continue;
                    term = term + restrict_y_to_x(d).scaled(NetExpr::constant(coeff));
                }
            }
        }
        if (term.is_zero() && j > 0) continue;
        AsymptoticSeries::Term t;
        t.sym = std::move(term);
        t.order = -2.0 * double(j);  // relative order drop; absolute m set by callers
        out.expansion.terms.push_back(std::move(t));
    }
    return out;
}

ThetaSymbol change_theta(const ThetaSymbol& b, const std::vector<Rational>& theta2,
                         std::optional<int> K) {
    SymbolExpr s = b.exact ? b.total() : b.expansion.total();
    const int n = s.dim_n();
    if (int(theta2.size()) != n) throw std::invalid_argument("change_theta: theta needs n entries");

    bool poly = s.is_polynomial();
    if (!poly && !K)
        throw std::invalid_argument("change_theta: truncation order required for non-polynomial symbols");
    int j_max = poly ? int(s.as_poly().degree_in_xi()) : *K;
    if (K) j_max = std::min(j_max, *K);

    std::vector<Rational> diff(theta2.size());
    for (size_t i = 0; i < diff.size(); ++i) diff[i] = b.theta[i] - theta2[i];

    GaussianRational mi(Rational(0), Rational(-1));

    ThetaSymbol out;
    out.theta = theta2;
    out.source = b.source;
    out.exact = poly;
    out.expansion.rho = b.expansion.rho;
    out.expansion.exact = poly;

    for (int j = 0; j <= j_max; ++j) {
        SymbolExpr term(n, VarSpace::Symbol);
        for (const auto& alpha : multis_of_order(n, j)) {
            GaussianRational coeff = theta_power(diff, alpha);
            if (coeff.is_zero()) continue;
            coeff = coeff * GaussianRational(Rational(1) / multi_factorial_rat(alpha));
            coeff = coeff * mi.pow(unsigned(j));
            Multi full(size_t(2 * n), 0u);
            for (int i = 0; i < n; ++i) {
                full[size_t(i)] = alpha[size_t(i)];
                full[size_t(n + i)] = alpha[size_t(i)];
            }
            SymbolExpr d = s.differentiate_multi(full, false);
            if (d.is_zero()) continue;
            term = term + d.scaled(NetExpr::constant(coeff));
        }
        if (term.is_zero() && j > 0) continue;
        AsymptoticSeries::Term t;
        t.sym = std::move(term);
        t.order = -2.0 * double(j);
        out.expansion.terms.push_back(std::move(t));
    }
    return out;
}

AsymptoticSeries compose(const SymbolExpr& b1, const SymbolExpr& b2, std::optional<int> K,
                         double rho) {
    if (b1.space() != VarSpace::Symbol || b2.space() != VarSpace::Symbol)
        throw std::invalid_argument("compose: 0-symbols expected");
    if (b1.dim_n() != b2.dim_n()) throw std::invalid_argument("compose: dimension mismatch");
    const int n = b1.dim_n();

    bool poly = b1.is_polynomial() && b2.is_polynomial();
    if (!poly && !K)
        throw std::invalid_argument("compose: truncation order required for non-polynomial symbols");

    int j_max;
    if (poly) {
        PolyExpr b2p = b2.as_poly();
        unsigned xdeg = 0;  // total x-block degree of b2 bounds D_x^alpha
        for (const auto& [e, c] : b2p.monomials()) {
            unsigned s = 0;
            for (int i = 0; i < n; ++i) s += e[size_t(i)];
            xdeg = std::max(xdeg, s);
        }
        j_max = int(std::min(b1.as_poly().degree_in_xi(), xdeg));
        if (K) j_max = std::min(j_max, *K);
    } else {
        j_max = *K;
    }

    double m1 = b1.claimed ? b1.claimed->m : double(b1.is_polynomial() ? b1.as_poly().total_degree() : 0u);
    double m2 = b2.claimed ? b2.claimed->m : double(b2.is_polynomial() ? b2.as_poly().total_degree() : 0u);
    int N1 = b1.claimed ? b1.claimed->N : 0;
    int N2 = b2.claimed ? b2.claimed->N : 0;

    AsymptoticSeries series;
    series.m = m1 + m2;
    series.rho = rho;
    series.N = N1 + N2;
    series.exact = poly;

    for (int j = 0; j <= j_max; ++j) {
        SymbolExpr term(n, VarSpace::Symbol);
        for (const auto& alpha : multis_of_order(n, j)) {
            Multi d_xi(size_t(2 * n), 0u), d_x(size_t(2 * n), 0u);
            for (int i = 0; i < n; ++i) {
                d_xi[size_t(n + i)] = alpha[size_t(i)];
                d_x[size_t(i)] = alpha[size_t(i)];
            }
            SymbolExpr left = b1.differentiate_multi(d_xi, false);
            if (left.is_zero()) continue;
            SymbolExpr right = b2.differentiate_multi(d_x, true);  // D_x
            if (right.is_zero()) continue;
            GaussianRational coeff(Rational(1) / multi_factorial_rat(alpha));
            term = term + (left * right).scaled(NetExpr::constant(coeff));
        }
        if (term.is_zero() && j > 0) continue;
        AsymptoticSeries::Term t;
        t.sym = std::move(term);
        t.order = m1 + m2 - 2.0 * rho * double(j);
        series.terms.push_back(std::move(t));
    }
    return series;
}

// ---------------------------------------------------------------------------

std::string HypoCertificate::verdict_str() const {
    switch (verdict) {
        case Result::Hypoelliptic: return "Hypoelliptic";
        case Result::Elliptic: return "Elliptic";
        case Result::Fail: return "Fail";
    }
    return "?";
}

int lower_bound_exponent(const SymbolExpr& a) {
    // dominant eps-power across coefficients: the smallest p of a k = 0 term
    // per coefficient, minimized over coefficients; ceil, clamped at 0
    bool found = false;
    Rational best;
    for (const auto& part : a.parts()) {
        for (const auto& [e, c] : part.num().monomials()) {
            bool has_plain = false;
            Rational pmin;
            for (const auto& [key, g] : c.terms()) {
                if (key.second != 0) continue;
                if (!has_plain || key.first < pmin) pmin = key.first;
                has_plain = true;
            }
            if (!has_plain) continue;
            if (!found || pmin < best) best = pmin;
            found = true;
        }
    }
    if (!found) return 0;
    long N = ceil_to_long(best);
    return int(std::max(0L, N));
}

namespace {

std::vector<VecD> radial_samples(int dim, double R, double r_max, int n_radii, int n_dirs,
                                 uint64_t seed) {
    Rng rng(seed);
    std::vector<VecD> dirs;
    for (int d = 0; d < dim; ++d) {
        for (double s : {1.0, -1.0}) {
            VecD e(size_t(dim), 0.0);
            e[size_t(d)] = s;
            dirs.push_back(e);
        }
    }
    while (int(dirs.size()) < n_dirs + 2 * dim) {
        VecD v(size_t(dim), 0.0);
        double r2 = 0;
        for (auto& c : v) {
            c = rng.uniform(-1.0, 1.0);
            r2 += c * c;
        }
        if (r2 < 1e-6) continue;
        double r = std::sqrt(r2);
        for (auto& c : v) c /= r;
        dirs.push_back(std::move(v));
    }
    double r_lo = R + 1.0;
    std::vector<VecD> pts;
    double ratio = std::pow(r_max / r_lo, 1.0 / double(std::max(1, n_radii - 1)));
    for (int i = 0; i < n_radii; ++i) {
        double r = r_lo * std::pow(ratio, double(i));
        for (const auto& d : dirs) {
            VecD z(size_t(dim), 0.0);
            for (size_t j = 0; j < z.size(); ++j) z[j] = r * d[j];
            pts.push_back(std::move(z));
        }
    }
    return pts;
}

struct LowerScan {
    double constant = 0;
    VecD argmin;
};

LowerScan lower_scan(const SymbolExpr& a, const WeightFunction& w, double l, int N,
                     const std::vector<VecD>& pts, const std::vector<double>& eps_grid) {
    LowerScan s;
    s.constant = std::numeric_limits<double>::infinity();
    for (double eps : eps_grid) {
        CompiledSymbol cs(a, eps);
        double epow = std::pow(eps, -double(N));
        for (const auto& z : pts) {
            double v = std::abs(cs.eval(z)) * std::pow(w.eval(z), -l) * epow;
            if (v < s.constant) {
                s.constant = v;
                s.argmin = z;
            }
        }
    }
    return s;
}

}  // namespace

HypoCertificate certify_hypoelliptic(const SymbolExpr& a, const WeightPtr& w, double l, double R,
                                     const CertifySpec& spec) {
    if (!w) throw std::invalid_argument("certify: weight required");
    if (!a.claimed) throw std::invalid_argument("certify: the symbol needs a claimed class");
    if (l > a.claimed->m + 1e-12) throw std::invalid_argument("certify: l must not exceed m");

    HypoCertificate cert;
    cert.l = l;
    cert.m = a.claimed->m;
    cert.rho = a.claimed->rho;
    cert.R = R;
    cert.N = lower_bound_exponent(a);
    cert.weight = w;

    auto eps_grid = standard_eps_grid(spec.eps_j_lo, spec.eps_j_hi);
    const int dim = a.nvars();

    auto pts = radial_samples(dim, R, spec.r_max, spec.n_radii, spec.n_dirs, spec.seed);
    auto pts_more = radial_samples(dim, R, 2.0 * spec.r_max, spec.n_radii + 4, 2 * spec.n_dirs,
                                   spec.seed + 1);

    LowerScan base = lower_scan(a, *w, l, cert.N, pts, eps_grid);
    LowerScan refined = lower_scan(a, *w, l, cert.N, pts_more, eps_grid);

    cert.lower_constant = std::min(base.constant, refined.constant);
    const double floor = 1e-9;
    if (!(cert.lower_constant > floor)) {
        cert.verdict = HypoCertificate::Result::Fail;
        cert.fail_reason = "lower bound violated";
        cert.witness = refined.constant <= base.constant ? refined.argmin : base.argmin;
        return cert;
    }
    if (refined.constant < 0.5 * base.constant) {
        cert.verdict = HypoCertificate::Result::Fail;
        cert.fail_reason = "lower constant decays under sample refinement";
        cert.witness = refined.argmin;
        return cert;
    }

    // derivative domination  |d^gamma a| <= c_gamma |a| Lambda^{-rho |gamma|}
    double rho = cert.rho;
    for (const auto& gamma : multis_up_to(dim, spec.gamma_max)) {
        if (multi_order(gamma) == 0) continue;
        SymbolExpr da = a.differentiate_multi(gamma, false);
        double c1 = 0, c2 = 0;
        for (int pass = 0; pass < 2; ++pass) {
            const auto& P = pass == 0 ? pts : pts_more;
            double& c = pass == 0 ? c1 : c2;
            for (double eps : eps_grid) {
                CompiledSymbol cs_a(a, eps), cs_d(da, eps);
                for (const auto& z : P) {
                    double av = std::abs(cs_a.eval(z));
                    if (av < 1e-300) continue;
                    double r = std::abs(cs_d.eval(z)) *
                               std::pow(w->eval(z), rho * double(multi_order(gamma))) / av;
                    c = std::max(c, r);
                }
            }
        }
        cert.derivative_constants[gamma] = c2;
        if (c2 > 2.0 * std::max(c1, 1e-12) && c2 > 1e3) {
            cert.verdict = HypoCertificate::Result::Fail;
            cert.fail_reason = "derivative constant c_" + multi_str(gamma) + " unstable";
            return cert;
        }
    }

    bool elliptic = std::abs(l - cert.m) < 1e-12;
    cert.verdict = elliptic ? HypoCertificate::Result::Elliptic
                            : HypoCertificate::Result::Hypoelliptic;
    return cert;
}

SymbolExpr perturb_hypoelliptic(const SymbolExpr& a, const HypoCertificate& cert,
                                const SymbolExpr& b) {
    if (!cert.ok()) throw std::invalid_argument("perturb: certificate must pass");
    if (b.is_zero()) return a;
    if (!b.claimed) throw std::invalid_argument("perturb: b needs a claimed class");
    if (b.claimed->m >= cert.l)
        throw std::invalid_argument("perturb: order of b must lie below l");
    int Nsum = cert.N + b.claimed->N;
    SymbolExpr out = a + b.scaled(NetExpr::eps_power(Rational(Nsum)));
    ClaimedClass cc;
    cc.m = cert.m;
    cc.rho = cert.rho;
    cc.N = cert.N;
    cc.weight = cert.weight;
    out.claimed = cc;
    return out;
}

SymbolExpr Parametrix::sum() const {
    SymbolExpr s = terms.at(0);
    for (size_t i = 1; i < terms.size(); ++i) s = s + terms[i];
    return s;
}

Parametrix parametrix(const SymbolExpr& a, const HypoCertificate& cert, int K,
                      ParametrixSide side) {
    if (!cert.ok()) throw std::invalid_argument("parametrix: certificate must pass");
    if (!a.is_polynomial())
        throw std::invalid_argument("parametrix: polynomial symbols only (p_k stay exact)");
    if (K < 0) throw std::invalid_argument("parametrix: K must be >= 0");
    const int n = a.dim_n();
    const int dim = 2 * n;

    Parametrix px;
    px.K = K;
    px.R = cert.R;
    px.side = side;
    px.source = a;
    px.certificate = cert;

    std::optional<double> cut;
    if (cert.R > 0) cut = cert.R;
    SymbolExpr p0(RationalExpr::reciprocal(a.as_poly(), cut));

    GaussianRational mi(Rational(0), Rational(-1));
    std::vector<SymbolExpr> p{p0};
    for (int k = 1; k <= K; ++k) {
        SymbolExpr acc(n, VarSpace::Symbol);
        for (int j = 0; j < k; ++j) {
            int go = k - j;  // |gamma| + j = k
            for (const auto& gamma : multis_of_order(n, go)) {
                Multi dxg(size_t(dim), 0u), dxig(size_t(dim), 0u);
                for (int i = 0; i < n; ++i) {
                    dxg[size_t(i)] = gamma[size_t(i)];
                    dxig[size_t(n + i)] = gamma[size_t(i)];
                }
                GaussianRational coeff =
                    mi.pow(unsigned(go)) * GaussianRational(Rational(1) / multi_factorial_rat(gamma));
                SymbolExpr piece;
                if (side == ParametrixSide::Left) {
                    // derivatives fall on a in x and on p_j in xi
                    piece = a.differentiate_multi(dxg, false) *
                            p[size_t(j)].differentiate_multi(dxig, false);
                } else {
                    piece = a.differentiate_multi(dxig, false) *
                            p[size_t(j)].differentiate_multi(dxg, false);
                }
                acc = acc + piece.scaled(NetExpr::constant(coeff));
            }
        }
        SymbolExpr pk = -(acc * p0);
        ClaimedClass cc;
        cc.m = -cert.l - 2.0 * cert.rho * double(k);
        cc.rho = cert.rho;
        cc.N = cert.N;
        cc.weight = cert.weight;
        pk.claimed = cc;
        p.push_back(std::move(pk));
    }
    {
        ClaimedClass cc;
        cc.m = -cert.l;
        cc.rho = cert.rho;
        cc.N = cert.N;
        cc.weight = cert.weight;
        p[0].claimed = cc;
    }

    // the recursion cancels every term with |alpha| + j <= K against 1, so
    // the residual is exactly the cross-term sum; building it that way keeps
    // the evaluation free of the (1 - 1) cancellation at large |z|
    SymbolExpr resid(n, VarSpace::Symbol);
    for (int j = 0; j <= K; ++j) {
        for (int ao = std::max(0, K + 1 - j); ao <= K; ++ao) {
            for (const auto& alpha : multis_of_order(n, ao)) {
                Multi dxi(size_t(dim), 0u), dx(size_t(dim), 0u);
                for (int i = 0; i < n; ++i) {
                    dxi[size_t(n + i)] = alpha[size_t(i)];
                    dx[size_t(i)] = alpha[size_t(i)];
                }
                GaussianRational coeff(Rational(1) / multi_factorial_rat(alpha));
                SymbolExpr piece;
                if (side == ParametrixSide::Left) {
                    piece = p[size_t(j)].differentiate_multi(dxi, false) *
                            a.differentiate_multi(dx, true);
                } else {
                    piece = a.differentiate_multi(dxi, false) *
                            p[size_t(j)].differentiate_multi(dx, true);
                }
                resid = resid + piece.scaled(NetExpr::constant(coeff));
            }
        }
    }
    if (cert.R > 0) {
        // inside the ball every p_j vanishes and the telescoped 1 is psi:
        // the residual picks up psi - 1, identically zero beyond 2R
        RationalExpr deficit_one(PolyExpr::constant(n, VarSpace::Symbol, NetExpr::one()));
        deficit_one.set_cutoff_deficit(cert.R);
        resid.add_part(std::move(deficit_one));
    }
    px.composed_residual = std::move(resid);
    px.terms = std::move(p);
    return px;
}

}  // namespace psido
