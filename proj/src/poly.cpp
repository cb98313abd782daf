#include "psidocalc/poly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace psido {

void PolyExpr::check_compat(const PolyExpr& o) const {
    if (n_ != o.n_ || space_ != o.space_)
        throw std::invalid_argument("poly: mismatched variable layout");
}

int PolyExpr::var_y(int i) const {
    if (space_ != VarSpace::Amplitude)
        throw std::logic_error("poly: y-variables exist in amplitude space only");
    return n_ + i;
}

PolyExpr PolyExpr::constant(int n, VarSpace space, NetExpr c) {
    PolyExpr p(n, space);
    if (!c.is_zero()) p.mono_.emplace(Monomial(size_t(p.nvars()), 0u), std::move(c));
    return p;
}

PolyExpr PolyExpr::variable(int n, VarSpace space, int var) {
    PolyExpr p(n, space);
    if (var < 0 || var >= p.nvars()) throw std::invalid_argument("poly: variable out of range");
    Monomial e(size_t(p.nvars()), 0u);
    e[size_t(var)] = 1;
    p.mono_.emplace(std::move(e), NetExpr::one());
    return p;
}

PolyExpr PolyExpr::monomial(int n, VarSpace space, Monomial e, NetExpr c) {
    PolyExpr p(n, space);
    if (int(e.size()) != p.nvars()) throw std::invalid_argument("poly: monomial size mismatch");
    if (!c.is_zero()) p.mono_.emplace(std::move(e), std::move(c));
    return p;
}

std::optional<NetExpr> PolyExpr::as_constant() const {
    if (mono_.empty()) return NetExpr::zero();
    if (mono_.size() != 1) return std::nullopt;
    const auto& [e, c] = *mono_.begin();
    for (unsigned v : e)
        if (v != 0) return std::nullopt;
    return c;
}

bool PolyExpr::is_net_free() const {
    for (const auto& [e, c] : mono_)
        if (!c.as_constant()) return false;
    return true;
}

bool PolyExpr::has_real_rational_coeffs() const {
    for (const auto& [e, c] : mono_) {
        auto k = c.as_constant();
        if (!k || k->im != 0) return false;
    }
    return true;
}

unsigned PolyExpr::total_degree() const {
    unsigned d = 0;
    for (const auto& [e, c] : mono_) d = std::max(d, multi_order(e));
    return d;
}

unsigned PolyExpr::degree_in(int var) const {
    unsigned d = 0;
    for (const auto& [e, c] : mono_) d = std::max(d, e[size_t(var)]);
    return d;
}

unsigned PolyExpr::degree_in_xi() const {
    unsigned d = 0;
    for (const auto& [e, c] : mono_) {
        unsigned s = 0;
        for (int i = 0; i < n_; ++i) s += e[size_t(var_xi(i))];
        d = std::max(d, s);
    }
    return d;
}

void PolyExpr::add_term(const Monomial& e, const NetExpr& c) {
    if (c.is_zero()) return;
    auto it = mono_.find(e);
    if (it == mono_.end()) {
        mono_.emplace(e, c);
    } else {
        it->second = it->second + c;
        if (it->second.is_zero()) mono_.erase(it);
    }
}

void PolyExpr::set_coeff(const Monomial& e, NetExpr c) {
    auto it = mono_.find(e);
    if (it != mono_.end()) mono_.erase(it);
    if (!c.is_zero()) mono_.emplace(e, std::move(c));
}

PolyExpr PolyExpr::operator+(const PolyExpr& o) const {
    check_compat(o);
    PolyExpr r = *this;
    for (const auto& [e, c] : o.mono_) r.add_term(e, c);
    return r;
}

PolyExpr PolyExpr::operator-() const {
    PolyExpr r(n_, space_);
    for (const auto& [e, c] : mono_) r.mono_.emplace(e, -c);
    return r;
}

PolyExpr PolyExpr::operator-(const PolyExpr& o) const { return *this + (-o); }

PolyExpr PolyExpr::operator*(const PolyExpr& o) const {
    check_compat(o);
    PolyExpr r(n_, space_);
    for (const auto& [ea, ca] : mono_) {
        for (const auto& [eb, cb] : o.mono_) {
            Monomial e(ea.size());
            for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

PolyExpr PolyExpr::scaled(const NetExpr& c) const {
    PolyExpr r(n_, space_);
    if (c.is_zero()) return r;
    for (const auto& [e, v] : mono_) {
        NetExpr nc = v * c;
        if (!nc.is_zero()) r.mono_.emplace(e, std::move(nc));
    }
    return r;
}

PolyExpr PolyExpr::pow(unsigned k) const {
    PolyExpr acc = constant(n_, space_, NetExpr::one());
    PolyExpr base = *this;
    while (k) {
        if (k & 1u) acc = acc * base;
        if (k >>= 1u) base = base * base;
    }
    return acc;
}

PolyExpr PolyExpr::differentiate(int var, unsigned order, bool d_normalized) const {
    if (var < 0 || var >= nvars()) throw std::invalid_argument("poly: variable out of range");
    PolyExpr r = *this;
    for (unsigned k = 0; k < order; ++k) {
        PolyExpr d(n_, space_);
        for (const auto& [e, c] : r.mono_) {
            unsigned pw = e[size_t(var)];
            if (pw == 0) continue;
            Monomial e2 = e;
            e2[size_t(var)] = pw - 1;
            d.add_term(e2, c.scaled(GaussianRational(long(pw))));
        }
        r = std::move(d);
    }
    if (d_normalized && order > 0) {
        GaussianRational mi(Rational(0), Rational(-1));  // -i
        r = r.scaled(mi.pow(order));
    }
    return r;
}

PolyExpr PolyExpr::differentiate_multi(const Multi& alpha, bool d_normalized) const {
    if (int(alpha.size()) != nvars()) throw std::invalid_argument("poly: multi-index size mismatch");
    PolyExpr r = *this;
    for (size_t v = 0; v < alpha.size(); ++v)
        if (alpha[v] > 0) r = r.differentiate(int(v), alpha[v], d_normalized);
    return r;
}

PolyExpr PolyExpr::substitute(const std::vector<PolyExpr>& images) const {
    if (int(images.size()) != nvars())
        throw std::invalid_argument("poly: substitution needs one image per variable");
    const int tn = images[0].dim_n();
    const VarSpace ts = images[0].space();
    for (const auto& im : images)
        if (im.dim_n() != tn || im.space() != ts)
            throw std::invalid_argument("poly: substitution images must share a layout");

    // power tables per variable, built lazily
    std::vector<std::vector<PolyExpr>> pows(images.size());
    auto power = [&](size_t v, unsigned k) -> const PolyExpr& {
        auto& tab = pows[v];
        if (tab.empty()) tab.push_back(PolyExpr::constant(tn, ts, NetExpr::one()));
        while (tab.size() <= k) tab.push_back(tab.back() * images[v]);
        return tab[k];
    };

    PolyExpr out(tn, ts);
    for (const auto& [e, c] : mono_) {
        PolyExpr term = PolyExpr::constant(tn, ts, c);
        for (size_t v = 0; v < e.size(); ++v)
            if (e[v] > 0) term = term * power(v, e[v]);
        out = out + term;
    }
    return out;
}

complexd PolyExpr::eval(Span z, double eps) const {
    if (int(z.size()) != nvars()) throw std::invalid_argument("poly: point dimension mismatch");
    complexd s = 0.0;
    for (const auto& [e, c] : mono_) {
        double m = 1.0;
        for (size_t i = 0; i < e.size(); ++i)
            for (unsigned k = 0; k < e[i]; ++k) m *= z[i];
        s += c.eval(eps) * m;
    }
    return s;
}

NetExpr PolyExpr::leading_coeff() const {
    if (mono_.empty()) return NetExpr::zero();
    return mono_.rbegin()->second;
}

std::optional<PolyExpr> PolyExpr::divide_exact(const PolyExpr& divisor) const {
    check_compat(divisor);
    if (divisor.is_zero()) throw std::invalid_argument("poly: division by zero polynomial");
    if (!divisor.is_net_free()) return std::nullopt;

    PolyExpr rem = *this;
    PolyExpr quot(n_, space_);
    const auto& dlead = *divisor.mono_.rbegin();
    GaussianRational dc = *dlead.second.as_constant();

    while (!rem.is_zero()) {
        const auto rlead = *rem.mono_.rbegin();  // copy; rem is reassigned below
        // exponentwise divisibility of leading monomials
        Monomial q(rlead.first.size());
        for (size_t i = 0; i < q.size(); ++i) {
            if (rlead.first[i] < dlead.first[i]) return std::nullopt;
            q[i] = rlead.first[i] - dlead.first[i];
        }
        NetExpr qc = rlead.second.divided_by(dc);
        PolyExpr t = PolyExpr::monomial(n_, space_, q, qc);
        quot = quot + t;
        rem = rem - t * divisor;
        // leading term cancels exactly; guard keeps the loop well-founded
        if (!rem.is_zero() && !GradedLex()(rem.mono_.rbegin()->first, rlead.first))
            return std::nullopt;
    }
    return quot;
}

std::optional<std::pair<NetExpr, PolyExpr>> PolyExpr::factor_scalar_net() const {
    if (mono_.empty()) return std::nullopt;
    std::optional<NetExpr::Key> key;
    for (const auto& [e, c] : mono_) {
        auto t = c.as_single_term();
        if (!t) return std::nullopt;
        NetExpr::Key k{t->eps_power, t->negligible_factor};
        if (!key) key = k;
        else if (*key != k) return std::nullopt;
    }
    NetExpr scalar = NetExpr::term(GaussianRational(1), key->first, key->second);
    PolyExpr rest(n_, space_);
    for (const auto& [e, c] : mono_)
        rest.mono_.emplace(e, NetExpr::constant(c.as_single_term()->coeff));
    return std::make_pair(scalar, rest);
}

int PolyExpr::cmp(const PolyExpr& a, const PolyExpr& b) {
    if (a.n_ != b.n_) return a.n_ < b.n_ ? -1 : 1;
    if (a.space_ != b.space_) return int(a.space_) < int(b.space_) ? -1 : 1;
    auto ia = a.mono_.begin(), ib = b.mono_.begin();
    for (; ia != a.mono_.end() && ib != b.mono_.end(); ++ia, ++ib) {
        if (ia->first != ib->first) return GradedLex()(ia->first, ib->first) ? -1 : 1;
        if (!(ia->second == ib->second)) return ia->second < ib->second ? -1 : 1;
    }
    if (ia != a.mono_.end()) return 1;
    if (ib != b.mono_.end()) return -1;
    return 0;
}

CompiledPoly compile_poly(const PolyExpr& p, double eps) {
    CompiledPoly cp;
    cp.terms.reserve(p.monomials().size());
    for (const auto& [e, c] : p.monomials()) cp.terms.push_back({c.eval(eps), e});
    return cp;
}

complexd CompiledPoly::eval(Span z) const {
    complexd s = 0.0;
    for (const auto& t : terms) {
        double m = 1.0;
        for (size_t i = 0; i < t.e.size(); ++i)
            for (unsigned k = 0; k < t.e[i]; ++k) m *= z[i];
        s += t.c * m;
    }
    return s;
}

std::string var_name(int n, VarSpace space, int var) {
    if (space == VarSpace::Symbol) {
        if (var < n) return "x" + std::to_string(var + 1);
        return "xi" + std::to_string(var - n + 1);
    }
    if (var < n) return "x" + std::to_string(var + 1);
    if (var < 2 * n) return "y" + std::to_string(var - n + 1);
    return "xi" + std::to_string(var - 2 * n + 1);
}

std::string PolyExpr::str() const {
    if (mono_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // print highest order first for readability
    for (auto it = mono_.rbegin(); it != mono_.rend(); ++it) {
        const auto& [e, c] = *it;
        if (!first) os << " + ";
        first = false;
        bool plain_one = c.is_one();
        std::string cs = c.str();
        bool needs_paren = cs.find('+') != std::string::npos || cs.find('*') != std::string::npos ||
                           cs.find(' ') != std::string::npos;
        bool any_var = multi_order(e) > 0;
        if (!any_var) {
            os << (needs_paren ? "(" + cs + ")" : cs);
            continue;
        }
        bool emitted = false;
        if (!plain_one) {
            os << (needs_paren ? "(" + cs + ")" : cs);
            emitted = true;
        }
        for (size_t v = 0; v < e.size(); ++v) {
            if (e[v] == 0) continue;
            if (emitted) os << "*";
            os << var_name(n_, space_, int(v));
            if (e[v] > 1) os << "^" << e[v];
            emitted = true;
        }
    }
    return os.str();
}

}  // namespace psido
