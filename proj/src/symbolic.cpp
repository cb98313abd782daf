#include "psidocalc/symbolic.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace psido {

RationalExpr RationalExpr::reciprocal(const PolyExpr& p, std::optional<double> cutoff_radius) {
    if (p.is_zero()) throw std::domain_error("rational: reciprocal of zero");
    RationalExpr r;
    PolyExpr body = p;
    NetExpr scalar = NetExpr::one();
    if (!body.is_net_free()) {
        auto fac = body.factor_scalar_net();
        if (!fac)
            throw std::domain_error(
                "rational: denominator must be NetExpr-free up to a single-term scalar net");
        scalar = fac->first;
        body = fac->second;
    }
    // monic base; the leading coefficient folds into the numerator
    GaussianRational lead = *body.leading_coeff().as_constant();
    PolyExpr base = body.scaled(lead.inverse());
    NetExpr num_net = scalar.inverse_single_term().scaled(lead.inverse());
    r.num_ = PolyExpr::constant(p.dim_n(), p.space(), num_net);
    if (base.as_constant()) {
        // 1/constant folds completely
        r.num_ = r.num_.scaled(base.as_constant()->inverse_single_term());
    } else {
        r.den_.emplace(base, 1);
    }
    r.cutoff_ = cutoff_radius;
    return r;
}

void RationalExpr::normalize() {
    if (num_.is_zero()) {
        den_.clear();
        return;
    }
    // fold constant factors and cancel factors dividing the numerator
    for (auto it = den_.begin(); it != den_.end();) {
        if (auto c = it->first.as_constant()) {
            GaussianRational g = *c->as_constant();
            num_ = num_.scaled(g.inverse().pow(unsigned(it->second)));
            it = den_.erase(it);
            continue;
        }
        while (it->second > 0) {
            auto q = num_.divide_exact(it->first);
            if (!q) break;
            num_ = std::move(*q);
            --it->second;
        }
        if (it->second == 0) it = den_.erase(it);
        else ++it;
    }
}

static std::optional<double> merge_cutoff(std::optional<double> a, std::optional<double> b) {
    if (!a) return b;
    if (!b) return a;
    return std::max(*a, *b);
}

RationalExpr RationalExpr::operator*(const RationalExpr& o) const {
    RationalExpr r;
    r.num_ = num_ * o.num_;
    r.den_ = den_;
    for (const auto& [b, k] : o.den_) {
        auto it = r.den_.find(b);
        if (it == r.den_.end()) r.den_.emplace(b, k);
        else it->second += k;
    }
    r.cutoff_ = merge_cutoff(cutoff_, o.cutoff_);
    r.deficit_ = deficit_ || o.deficit_;
    r.normalize();
    return r;
}

RationalExpr RationalExpr::operator-() const {
    RationalExpr r = *this;
    r.num_ = -r.num_;
    return r;
}

RationalExpr RationalExpr::scaled(const NetExpr& c) const {
    RationalExpr r = *this;
    r.num_ = r.num_.scaled(c);
    if (r.num_.is_zero()) r.den_.clear();
    return r;
}

std::optional<RationalExpr> RationalExpr::try_add(const RationalExpr& o) const {
    if (cutoff_.has_value() != o.cutoff_.has_value()) return std::nullopt;
    if (cutoff_ && std::abs(*cutoff_ - *o.cutoff_) > 0) return std::nullopt;
    if (deficit_ != o.deficit_) return std::nullopt;
    RationalExpr r;
    r.cutoff_ = cutoff_;
    r.deficit_ = deficit_;
    // common denominator with factorwise max powers
    r.den_ = den_;
    for (const auto& [b, k] : o.den_) {
        auto it = r.den_.find(b);
        if (it == r.den_.end()) r.den_.emplace(b, k);
        else it->second = std::max(it->second, k);
    }
    auto deficit = [&](const std::map<PolyExpr, int, PolyLess>& have) {
        PolyExpr m = PolyExpr::constant(num_.dim_n(), num_.space(), NetExpr::one());
        for (const auto& [b, k] : r.den_) {
            int kd = k;
            auto it = have.find(b);
            if (it != have.end()) kd -= it->second;
            if (kd > 0) m = m * b.pow(unsigned(kd));
        }
        return m;
    };
    r.num_ = num_ * deficit(den_) + o.num_ * deficit(o.den_);
    r.normalize();
    return r;
}

RationalExpr RationalExpr::differentiate(int var, unsigned order, bool d_normalized) const {
    RationalExpr r = *this;
    for (unsigned k = 0; k < order; ++k) {
        if (r.den_.empty()) {
            r.num_ = r.num_.differentiate(var);
            continue;
        }
        PolyExpr prod = PolyExpr::constant(num_.dim_n(), num_.space(), NetExpr::one());
        for (const auto& [b, kk] : r.den_) prod = prod * b;
        PolyExpr top = r.num_.differentiate(var) * prod;
        for (const auto& [b, kk] : r.den_) {
            PolyExpr others = PolyExpr::constant(num_.dim_n(), num_.space(), NetExpr::one());
            for (const auto& [b2, kk2] : r.den_)
                if (!(b2 == b)) others = others * b2;
            top = top - r.num_.scaled(GaussianRational(long(kk))) * b.differentiate(var) * others;
        }
        RationalExpr d;
        d.cutoff_ = r.cutoff_;
        d.num_ = std::move(top);
        for (const auto& [b, kk] : r.den_) d.den_.emplace(b, kk + 1);
        d.normalize();
        r = std::move(d);
    }
    if (d_normalized && order > 0) {
        GaussianRational mi(Rational(0), Rational(-1));
        r.num_ = r.num_.scaled(mi.pow(order));
    }
    return r;
}

RationalExpr RationalExpr::differentiate_multi(const Multi& alpha, bool d_normalized) const {
    RationalExpr r = *this;
    unsigned total = 0;
    for (size_t v = 0; v < alpha.size(); ++v) {
        if (alpha[v] > 0) {
            r = r.differentiate(int(v), alpha[v], false);
            total += alpha[v];
        }
    }
    if (d_normalized && total > 0) {
        GaussianRational mi(Rational(0), Rational(-1));
        r.num_ = r.num_.scaled(mi.pow(total));
    }
    return r;
}

complexd RationalExpr::eval(Span z, double eps) const {
    double psi = 1.0;
    if (cutoff_) {
        double r = norm2(z);
        psi = cutoff_psi_radius(r, *cutoff_);
        if (deficit_) psi -= 1.0;
        if (psi == 0.0) return 0.0;
    }
    complexd v = num_.eval(z, eps);
    for (const auto& [b, k] : den_) {
        complexd bv = b.eval(z, eps);
        for (int i = 0; i < k; ++i) v /= bv;
    }
    return psi * v;
}

PolyExpr RationalExpr::den_expanded() const {
    PolyExpr prod = PolyExpr::constant(num_.dim_n(), num_.space(), NetExpr::one());
    for (const auto& [b, k] : den_) prod = prod * b.pow(unsigned(k));
    return prod;
}

bool RationalExpr::equals(const RationalExpr& o) const {
    if (cutoff_.has_value() != o.cutoff_.has_value()) return false;
    if (cutoff_ && *cutoff_ != *o.cutoff_) return false;
    if (deficit_ != o.deficit_) return false;
    return (num_ * o.den_expanded()) == (o.num_ * den_expanded());
}

std::string RationalExpr::str() const {
    std::ostringstream os;
    if (cutoff_) os << (deficit_ ? "(psi-1)[R=" : "psi[R=") << *cutoff_ << "]*";
    if (den_.empty()) {
        os << num_.str();
        return os.str();
    }
    os << "(" << num_.str() << ") / (";
    bool first = true;
    for (const auto& [b, k] : den_) {
        if (!first) os << " * ";
        first = false;
        os << "(" << b.str() << ")";
        if (k > 1) os << "^" << k;
    }
    os << ")";
    return os.str();
}

// ---------------------------------------------------------------------------

SymbolExpr::SymbolExpr(PolyExpr p) : n_(p.dim_n()), space_(p.space()) {
    if (!p.is_zero()) parts_.push_back(RationalExpr(std::move(p)));
}

SymbolExpr::SymbolExpr(RationalExpr r) : n_(r.dim_n()), space_(r.space()) {
    if (!r.is_zero()) parts_.push_back(std::move(r));
}

bool SymbolExpr::is_zero() const {
    for (const auto& p : parts_)
        if (!p.is_zero()) return false;
    return true;
}

bool SymbolExpr::is_polynomial() const {
    for (const auto& p : parts_)
        if (!p.is_polynomial() || p.cutoff_radius()) return false;
    return true;
}

PolyExpr SymbolExpr::as_poly() const {
    if (!is_polynomial()) throw std::logic_error("symbol: not a polynomial");
    PolyExpr sum(n_, space_);
    for (const auto& p : parts_) sum = sum + p.num();
    return sum;
}

void SymbolExpr::add_part(RationalExpr r) {
    if (r.is_zero()) return;
    for (size_t i = 0; i < parts_.size(); ++i) {
        // merge parts with matching cutoff; try_add aligns denominators
        auto merged = parts_[i].try_add(r);
        if (merged) {
            if (merged->is_zero()) parts_.erase(parts_.begin() + long(i));
            else parts_[i] = std::move(*merged);
            return;
        }
    }
    parts_.push_back(std::move(r));
}

SymbolExpr SymbolExpr::operator+(const SymbolExpr& o) const {
    SymbolExpr r = *this;
    r.claimed.reset();
    for (const auto& p : o.parts_) r.add_part(p);
    return r;
}

SymbolExpr SymbolExpr::operator-() const {
    SymbolExpr r(n_, space_);
    for (const auto& p : parts_) r.parts_.push_back(-p);
    return r;
}

SymbolExpr SymbolExpr::operator-(const SymbolExpr& o) const { return *this + (-o); }

SymbolExpr SymbolExpr::operator*(const SymbolExpr& o) const {
    SymbolExpr r(n_, space_);
    for (const auto& a : parts_)
        for (const auto& b : o.parts_) r.add_part(a * b);
    return r;
}

SymbolExpr SymbolExpr::scaled(const NetExpr& c) const {
    SymbolExpr r(n_, space_);
    for (const auto& p : parts_) r.add_part(p.scaled(c));
    return r;
}

SymbolExpr SymbolExpr::differentiate_multi(const Multi& alpha, bool d_normalized) const {
    SymbolExpr r(n_, space_);
    for (const auto& p : parts_) r.add_part(p.differentiate_multi(alpha, d_normalized));
    return r;
}

complexd SymbolExpr::eval(Span z, double eps) const {
    complexd s = 0.0;
    for (const auto& p : parts_) s += p.eval(z, eps);
    return s;
}

bool SymbolExpr::equals(const SymbolExpr& o) const {
    SymbolExpr d = *this - o;
    // after part merging a vanishing difference leaves no parts; cutoff
    // mismatches keep parts separate and compare false unless each is zero
    for (const auto& p : d.parts_)
        if (!p.is_zero()) return false;
    return true;
}

bool SymbolExpr::all_coeffs_negligible() const {
    for (const auto& p : parts_) {
        if (!p.is_polynomial()) return false;
        for (const auto& [e, c] : p.num().monomials())
            if (!c.all_terms_negligible()) return false;
    }
    return true;
}

std::string SymbolExpr::str() const {
    if (parts_.empty()) return "0";
    std::ostringstream os;
    for (size_t i = 0; i < parts_.size(); ++i) {
        if (i) os << " + ";
        os << parts_[i].str();
    }
    return os.str();
}

// ---------------------------------------------------------------------------

CompiledSymbol::CompiledSymbol(const SymbolExpr& s, double eps) {
    for (const auto& p : s.parts()) {
        Part cp;
        cp.num = compile_poly(p.num(), eps);
        for (const auto& [b, k] : p.den()) cp.den.emplace_back(compile_poly(b, eps), k);
        cp.cutoff = p.cutoff_radius();
        cp.deficit = p.cutoff_deficit();
        parts_.push_back(std::move(cp));
    }
}

complexd CompiledSymbol::eval(Span z) const {
    complexd s = 0.0;
    for (const auto& p : parts_) {
        double psi = 1.0;
        if (p.cutoff) {
            double r = norm2(z);
            psi = cutoff_psi_radius(r, *p.cutoff);
            if (p.deficit) psi -= 1.0;
            if (psi == 0.0) continue;
        }
        complexd v = p.num.eval(z);
        for (const auto& [b, k] : p.den) {
            complexd bv = b.eval(z);
            for (int i = 0; i < k; ++i) v /= bv;
        }
        s += psi * v;
    }
    return s;
}

}  // namespace psido
