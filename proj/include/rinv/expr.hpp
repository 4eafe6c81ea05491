#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rinv/monomial.hpp"
#include "rinv/rational.hpp"

namespace rinv {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " (at position " + std::to_string(position) + ")"),
        position(position) {}
  std::size_t position;
};

struct ParsedTerm {
  Rational coeff;
  Monomial mono;
};

// Index-notation expression language.
//
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := [rational '*'] factor ('*' factor)*
//   factor := 'CD' '[' idx ']' apply | head
//   apply  := '[' factor ']' | '(' factor ')' | '@' factor
//   head   := 'R' '[' idx,idx,idx,idx [';' idx (',' idx)*] ']' | 'R'
//           | 'Ricci' '[' idx ',' idx ']' | 'RicciScalar'
//           | 'eps' '[' idx,idx,idx,idx ']'
//
// Indices are letters with an ignored variance mark ('-a' and 'a' are the
// same name; the metric is fixed, so variance is a printing concern). Every
// name must appear exactly twice in a term. CD derivatives nest
// outermost-first in source order; the list after ';' in an R head is
// innermost-first, so R[a,b,c,d;e,f] means the f-derivative applied last.
std::vector<ParsedTerm> parse_expression(const std::string& text);

// Canonical-letter rendering, parseable back: parse(print(m)) == m. A single
// fully traced underived factor prints as the scalar shorthand "R".
std::string print_monomial(const Monomial& m);

// Signed sum of printed terms; empty input prints "0".
std::string print_combination(const std::vector<std::pair<Rational, Monomial>>& terms);
std::string print_coefficient(const Rational& q, bool leading);

}  // namespace rinv
