// Text grammar for symbols and nets: variables x1..xn, xi1..xin (and
// y1..yn in amplitude space), the imaginary unit i, rationals a/b, eps^p
// factors with rational p, negl^k for exp(-1/eps)^k, operators + - * ^
// and parentheses. Example: "xi1^2 + (1+2i)*x1^2".
#pragma once

#include "psidocalc/poly.hpp"

#include <string>

namespace psido {

struct ParseError : std::invalid_argument {
    size_t position;
    ParseError(const std::string& msg, size_t pos)
        : std::invalid_argument(msg + " at position " + std::to_string(pos)), position(pos) {}
};

PolyExpr parse_poly(const std::string& text, int n, VarSpace space);
NetExpr parse_net(const std::string& text);

}  // namespace psido
