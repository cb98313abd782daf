#include "psidocalc/expr_text.hpp"

#include <cctype>
#include <optional>

namespace psido {

namespace {

struct Token {
    enum Kind { Number, Ident, Plus, Minus, Star, Caret, LParen, RParen, End } kind;
    std::string text;   // ident name or number literal (may carry '/...' and trailing 'i')
    size_t pos;
};

struct Lexer {
    const std::string& s;
    size_t i = 0;
    explicit Lexer(const std::string& str) : s(str) {}

    Token next() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        size_t start = i;
        if (i >= s.size()) return {Token::End, "", start};
        char c = s[i];
        switch (c) {
            case '+': ++i; return {Token::Plus, "+", start};
            case '-': ++i; return {Token::Minus, "-", start};
            case '*': ++i; return {Token::Star, "*", start};
            case '^': ++i; return {Token::Caret, "^", start};
            case '(': ++i; return {Token::LParen, "(", start};
            case ')': ++i; return {Token::RParen, ")", start};
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            if (j < s.size() && s[j] == '/') {
                size_t k = j + 1;
                while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
                if (k == j + 1) throw ParseError("expected digits after '/'", j + 1);
                j = k;
            }
            bool imag = j < s.size() && s[j] == 'i' &&
                        (j + 1 >= s.size() ||
                         !std::isalnum(static_cast<unsigned char>(s[j + 1])));
            std::string lit = s.substr(i, j - i);
            if (imag) {
                lit += "i";
                ++j;
            }
            i = j;
            return {Token::Number, lit, start};
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < s.size() && std::isalnum(static_cast<unsigned char>(s[j]))) ++j;
            std::string name = s.substr(i, j - i);
            i = j;
            return {Token::Ident, name, start};
        }
        throw ParseError(std::string("unexpected character '") + c + "'", i);
    }
};

// atoms are polynomials except for the bare eps / negl factors, whose
// exponent may be rational resp. is a nonnegative integer
struct Val {
    enum Kind { Poly, Eps, Negl } kind = Poly;
    PolyExpr poly;
};

struct Parser {
    Lexer lex;
    Token tok;
    int n;
    VarSpace space;

    Parser(const std::string& s, int n_, VarSpace sp) : lex(s), n(n_), space(sp) { advance(); }
    void advance() { tok = lex.next(); }
    void expect(Token::Kind k, const char* what) {
        if (tok.kind != k) throw ParseError(std::string("expected ") + what, tok.pos);
        advance();
    }

    PolyExpr constant(NetExpr c) const { return PolyExpr::constant(n, space, std::move(c)); }

    PolyExpr parse_expr() {
        PolyExpr acc = parse_term();
        while (tok.kind == Token::Plus || tok.kind == Token::Minus) {
            bool minus = tok.kind == Token::Minus;
            advance();
            PolyExpr t = parse_term();
            acc = minus ? acc - t : acc + t;
        }
        return acc;
    }

    PolyExpr parse_term() {
        PolyExpr acc = resolve(parse_factor());
        while (tok.kind == Token::Star) {
            advance();
            acc = acc * resolve(parse_factor());
        }
        return acc;
    }

    PolyExpr resolve(const Val& v) {
        switch (v.kind) {
            case Val::Poly: return v.poly;
            case Val::Eps: return constant(NetExpr::eps_power(Rational(1)));
            case Val::Negl: return constant(NetExpr::negligible_unit(1));
        }
        return v.poly;
    }

    Val parse_factor() {
        Val base = parse_atom();
        while (tok.kind == Token::Caret) {
            advance();
            base = apply_power(base);
        }
        return base;
    }

    Val apply_power(const Val& base) {
        // exponent: integer, -integer, or (signed rational)
        bool neg = false;
        Rational p;
        size_t pos = tok.pos;
        if (tok.kind == Token::LParen) {
            advance();
            if (tok.kind == Token::Minus) {
                neg = true;
                advance();
            }
            p = read_rational();
            expect(Token::RParen, "')'");
        } else {
            if (tok.kind == Token::Minus) {
                neg = true;
                advance();
            }
            p = read_rational();
        }
        if (neg) p = -p;

        Val out;
        if (base.kind == Val::Eps) {
            out.poly = constant(NetExpr::eps_power(p));
            return out;
        }
        if (base.kind == Val::Negl) {
            if (p < 0 || boost::multiprecision::denominator(p) != 1)
                throw ParseError("negl exponent must be a nonnegative integer", pos);
            out.poly = constant(NetExpr::negligible_unit(unsigned(ceil_to_long(p))));
            return out;
        }
        if (p < 0 || boost::multiprecision::denominator(p) != 1)
            throw ParseError("polynomial exponent must be a nonnegative integer", pos);
        out.poly = base.poly.pow(unsigned(ceil_to_long(p)));
        return out;
    }

    Rational read_rational() {
        if (tok.kind != Token::Number) throw ParseError("expected a number", tok.pos);
        std::string lit = tok.text;
        if (!lit.empty() && lit.back() == 'i')
            throw ParseError("exponent cannot be imaginary", tok.pos);
        advance();
        return rational_parse(lit);
    }

    Val parse_atom() {
        Val v;
        switch (tok.kind) {
            case Token::Minus: {
                advance();
                Val inner = parse_factor();
                v.poly = -resolve(inner);
                return v;
            }
            case Token::Plus: {
                advance();
                return parse_factor();
            }
            case Token::LParen: {
                advance();
                v.poly = parse_expr();
                expect(Token::RParen, "')'");
                return v;
            }
            case Token::Number: {
                std::string lit = tok.text;
                advance();
                bool imag = !lit.empty() && lit.back() == 'i';
                if (imag) lit.pop_back();
                Rational q = rational_parse(lit);
                GaussianRational g = imag ? GaussianRational(Rational(0), q) : GaussianRational(q);
                v.poly = constant(NetExpr::constant(g));
                return v;
            }
            case Token::Ident: {
                std::string name = tok.text;
                size_t pos = tok.pos;
                advance();
                if (name == "i") {
                    v.poly = constant(NetExpr::constant(GaussianRational::unit_i()));
                    return v;
                }
                if (name == "eps") {
                    v.kind = Val::Eps;
                    v.poly = constant(NetExpr::eps_power(Rational(1)));
                    return v;
                }
                if (name == "negl") {
                    v.kind = Val::Negl;
                    v.poly = constant(NetExpr::negligible_unit(1));
                    return v;
                }
                v.poly = parse_variable(name, pos);
                return v;
            }
            default:
                throw ParseError("unexpected token", tok.pos);
        }
    }

    PolyExpr parse_variable(const std::string& name, size_t pos) {
        auto index_of = [&](size_t prefix_len) -> int {
            if (name.size() <= prefix_len) throw ParseError("missing variable index", pos);
            int idx = 0;
            for (size_t k = prefix_len; k < name.size(); ++k) {
                if (!std::isdigit(static_cast<unsigned char>(name[k])))
                    throw ParseError("bad variable '" + name + "'", pos);
                idx = idx * 10 + (name[k] - '0');
            }
            if (idx < 1 || idx > n)
                throw ParseError("variable index out of range in '" + name + "'", pos);
            return idx - 1;
        };
        if (name.rfind("xi", 0) == 0) {
            int i = index_of(2);
            int var = space == VarSpace::Symbol ? n + i : 2 * n + i;
            return PolyExpr::variable(n, space, var);
        }
        if (name[0] == 'x') {
            int i = index_of(1);
            return PolyExpr::variable(n, space, i);
        }
        if (name[0] == 'y') {
            if (space != VarSpace::Amplitude)
                throw ParseError("y-variables need an amplitude expression", pos);
            int i = index_of(1);
            return PolyExpr::variable(n, space, n + i);
        }
        throw ParseError("unknown identifier '" + name + "'", pos);
    }
};

}  // namespace

PolyExpr parse_poly(const std::string& text, int n, VarSpace space) {
    Parser p(text, n, space);
    PolyExpr e = p.parse_expr();
    if (p.tok.kind != Token::End) throw ParseError("trailing input", p.tok.pos);
    return e;
}

NetExpr parse_net(const std::string& text) {
    PolyExpr p = parse_poly(text, 1, VarSpace::Symbol);
    auto c = p.as_constant();
    if (!c) throw ParseError("net expression must not contain variables", 0);
    return *c;
}

NetExpr NetExpr::parse(const std::string& text) { return parse_net(text); }

}  // namespace psido
