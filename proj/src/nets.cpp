#include "psidocalc/nets.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace psido {

std::string NetVerdict::str() const {
    switch (kind) {
        case NetClass::Moderate: return "Moderate(" + std::to_string(N) + ")";
        case NetClass::Negligible: return "Negligible";
        case NetClass::NotModerate: return "NotModerate";
    }
    return "?";
}

void NetExpr::insert(const Key& k, const GaussianRational& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(k);
    if (it == terms_.end()) {
        terms_.emplace(k, c);
    } else {
        it->second = it->second + c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

NetExpr NetExpr::constant(const GaussianRational& c) {
    NetExpr n;
    n.insert({Rational(0), 0u}, c);
    return n;
}

NetExpr NetExpr::term(const GaussianRational& c, const Rational& p, unsigned k) {
    NetExpr n;
    n.insert({p, k}, c);
    return n;
}

bool NetExpr::is_one() const {
    auto c = as_constant();
    return c && c->is_one();
}

std::optional<GaussianRational> NetExpr::as_constant() const {
    if (terms_.empty()) return GaussianRational();
    if (terms_.size() != 1) return std::nullopt;
    const auto& [key, c] = *terms_.begin();
    if (key.first != 0 || key.second != 0) return std::nullopt;
    return c;
}

std::optional<NetTerm> NetExpr::as_single_term() const {
    if (terms_.size() != 1) return std::nullopt;
    const auto& [key, c] = *terms_.begin();
    return NetTerm{c, key.first, key.second};
}

NetExpr NetExpr::operator+(const NetExpr& o) const {
    NetExpr r = *this;
    for (const auto& [k, c] : o.terms_) r.insert(k, c);
    return r;
}

NetExpr NetExpr::operator-() const {
    NetExpr r;
    for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
    return r;
}

NetExpr NetExpr::operator-(const NetExpr& o) const { return *this + (-o); }

NetExpr NetExpr::operator*(const NetExpr& o) const {
    NetExpr r;
    for (const auto& [ka, ca] : terms_)
        for (const auto& [kb, cb] : o.terms_)
            r.insert({ka.first + kb.first, ka.second + kb.second}, ca * cb);
    return r;
}

NetExpr NetExpr::scaled(const GaussianRational& c) const {
    NetExpr r;
    if (c.is_zero()) return r;
    for (const auto& [k, v] : terms_) r.terms_.emplace(k, v * c);
    return r;
}

NetExpr NetExpr::inverse_single_term() const {
    auto t = as_single_term();
    if (!t) throw std::domain_error("NetExpr: inverse defined for single-term nets only");
    if (t->negligible_factor != 0)
        throw std::domain_error("NetExpr: cannot invert a negligible factor");
    return term(t->coeff.inverse(), -t->eps_power, 0);
}

complexd NetExpr::eval(double eps) const {
    if (eps <= 0.0 || eps > 1.0) throw std::invalid_argument("NetExpr: eps must lie in (0,1]");
    complexd s = 0.0;
    for (const auto& [k, c] : terms_) {
        double mag = std::exp(to_double(k.first) * std::log(eps) - double(k.second) / eps);
        s += c.to_complex() * mag;
    }
    return s;
}

NetVerdict NetExpr::classify() const {
    if (terms_.empty()) return {NetClass::Negligible, 0};
    bool any_plain = false;
    Rational min_p;
    for (const auto& [k, c] : terms_) {
        if (k.second == 0) {
            if (!any_plain || k.first < min_p) min_p = k.first;
            any_plain = true;
        }
    }
    if (!any_plain) return {NetClass::Negligible, 0};
    long N = ceil_to_long(-min_p);
    if (N < 0) N = 0;
    return {NetClass::Moderate, int(N)};
}

bool NetExpr::all_terms_negligible() const {
    for (const auto& [k, c] : terms_)
        if (k.second == 0) return false;
    return true;
}

NetExpr net_arith(const NetExpr& a, const NetExpr& b, char op) {
    switch (op) {
        case '+': return a + b;
        case '*': return a * b;
        default: throw std::invalid_argument("net_arith: op must be '+' or '*'");
    }
}

std::string rational_str(const Rational& r) {
    std::ostringstream os;
    os << boost::multiprecision::numerator(r);
    if (boost::multiprecision::denominator(r) != 1)
        os << "/" << boost::multiprecision::denominator(r);
    return os.str();
}

Rational rational_parse(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(BigInt(s));
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("rational: zero denominator");
    return Rational(num) / Rational(den);
}

std::string GaussianRational::str() const {
    if (im == 0) return rational_str(re);
    std::string s;
    if (re != 0) s += rational_str(re);
    if (im > 0 && re != 0) s += "+";
    if (im == -1) s += "-";
    else if (im != 1) s += rational_str(im) + "*";
    s += "i";
    return s;
}

std::string NetExpr::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        bool complex_coeff = c.im != 0 && c.re != 0;
        bool has_factor = k.first != 0 || k.second != 0;
        if (!has_factor) {
            os << (complex_coeff ? "(" + c.str() + ")" : c.str());
            continue;
        }
        if (!c.is_one()) {
            os << (complex_coeff || (c.im != 0) ? "(" + c.str() + ")" : c.str()) << "*";
        }
        bool emitted = false;
        if (k.first != 0) {
            os << "eps^";
            bool frac = boost::multiprecision::denominator(k.first) != 1 || k.first < 0;
            os << (frac ? "(" + rational_str(k.first) + ")" : rational_str(k.first));
            emitted = true;
        }
        if (k.second != 0) {
            if (emitted) os << "*";
            os << "negl";
            if (k.second != 1) os << "^" << k.second;
            emitted = true;
        }
        if (!emitted) os << "1";
    }
    return os.str();
}

std::vector<double> standard_eps_grid(int j_lo, int j_hi) {
    std::vector<double> g;
    for (int j = j_lo; j <= j_hi; ++j) g.push_back(std::ldexp(1.0, -j));
    return g;
}

ExponentEstimate estimate_exponent(const std::vector<std::pair<double, double>>& samples,
                                   const ExponentOptions& opt) {
    if (!opt.lenient && samples.size() < opt.min_samples)
        throw std::invalid_argument("estimate_exponent: need at least 8 samples");

    ExponentEstimate est;
    std::vector<double> xs, ys;  // x = log(1/eps), y = log magnitude
    for (const auto& [eps, mag] : samples) {
        if (eps <= 0 || eps > 1) throw std::invalid_argument("estimate_exponent: eps out of range");
        if (std::isnan(mag) || mag < 0)
            throw std::invalid_argument("estimate_exponent: magnitudes must be >= 0");
        if (std::isinf(mag)) {
            // overflowed the floating range: no eps^{-N} tames that
            est.verdict = {NetClass::NotModerate, 0};
            est.slope = std::numeric_limits<double>::infinity();
            return est;
        }
        if (mag <= opt.zero_floor || mag == 0.0) continue;  // spec: ignore zero magnitudes
        xs.push_back(-std::log(eps));
        ys.push_back(std::log(mag));
    }
    est.used_samples = xs.size();
    if (xs.empty()) {
        est.all_zero = true;
        est.verdict = {NetClass::Negligible, 0};
        return est;
    }
    // a tail that vanished below the floor decays faster than any power
    if (xs.size() < 4) {
        est.verdict = {NetClass::Negligible, 0};
        est.slope = -1e9;
        return est;
    }

    est.slope = ls_slope(xs, ys);
    for (size_t i = 0; i + 1 < xs.size(); ++i)
        est.successive_slopes.push_back((ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]));

    // super-polynomial growth: successive slopes increase beyond threshold
    if (est.successive_slopes.size() >= 3) {
        const auto& s = est.successive_slopes;
        bool increasing_tail = true;
        size_t half = s.size() / 2;
        for (size_t i = half; i + 1 < s.size(); ++i)
            if (s[i + 1] < s[i] - 1e-9) increasing_tail = false;
        if (increasing_tail && s.back() - s.front() > opt.conv_threshold) {
            est.verdict = {NetClass::NotModerate, 0};
            return est;
        }
    }

    // negligible: every suffix decays faster than eps^q_max (with a margin,
    // so that eps^q_max itself stays Moderate)
    bool negligible = true;
    double bar = -(double(opt.q_max) + opt.negligible_margin);
    for (size_t start = 0; start + 4 <= xs.size(); ++start) {
        std::vector<double> sx(xs.begin() + long(start), xs.end());
        std::vector<double> sy(ys.begin() + long(start), ys.end());
        if (ls_slope(sx, sy) > bar) {
            negligible = false;
            break;
        }
    }
    if (negligible) {
        est.verdict = {NetClass::Negligible, 0};
        return est;
    }

    double s = est.slope;
    long N;
    double rounded = std::round(s);
    if (std::abs(s - rounded) <= opt.round_band) N = long(rounded);
    else N = long(std::ceil(s));
    if (N < 0) N = 0;
    est.verdict = {NetClass::Moderate, int(N)};
    return est;
}

}  // namespace psido
