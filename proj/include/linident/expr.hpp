#pragma once

// parser for rational expressions in model parameters, e.g.
// "a13*a32*a21" or "(a02*a03 - a23*a32)/a01^2". produces an exact
// numerator/denominator pair over the model's parameter ring.

#include <linident/model.hpp>

#include <string>

namespace linident {

struct RationalExpr {
    MPoly num;
    MPoly den; // never the zero polynomial
};

// grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := ['-'] base
//   base   := atom ['^' nonneg-int]
//   atom   := param | integer | '(' expr ')'
// throws ModelError{ParseError} on syntax errors or unknown parameter names
RationalExpr parse_rational_expr(const std::string& text, const CompModel& m);

} // namespace linident
