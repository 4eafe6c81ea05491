#include "rinv/expr.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace rinv {

namespace {

struct Lexer {
  const std::string& text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= text.size();
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  bool accept(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c, const char* what) {
    if (!accept(c)) throw ParseError(std::string("expected '") + c + "' " + what, pos);
  }
  bool peek_name() { return std::isalpha(static_cast<unsigned char>(peek())); }
  std::string name() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() && std::isalnum(static_cast<unsigned char>(text[pos]))) ++pos;
    if (start == pos) throw ParseError("expected a name", pos);
    return text.substr(start, pos - start);
  }
  bool peek_digit() { return std::isdigit(static_cast<unsigned char>(peek())); }
  Int integer() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (start == pos) throw ParseError("expected a number", pos);
    return Int(text.substr(start, pos - start));
  }
};

struct RawFactor {
  bool eps = false;
  std::vector<std::string> riemann;  // 4 names (or the 4 eps names)
  std::vector<std::string> derivs;   // innermost-first
  std::size_t pos = 0;
  int lambda() const { return static_cast<int>(derivs.size()); }
};

struct Parser {
  Lexer lx;
  int fresh = 0;

  std::string index() {
    lx.skip_ws();
    const std::size_t at = lx.pos;
    lx.accept('-');  // variance mark, ignored for contraction
    if (!lx.peek_name()) throw ParseError("expected an index letter", at);
    return lx.name();
  }

  std::vector<std::string> index_list(int exactly) {
    std::vector<std::string> out;
    out.push_back(index());
    while (lx.accept(',')) out.push_back(index());
    if (exactly > 0 && static_cast<int>(out.size()) != exactly)
      throw ParseError("expected " + std::to_string(exactly) + " indices", lx.pos);
    return out;
  }

  std::string fresh_name() { return "#" + std::to_string(fresh++); }

  RawFactor factor() {
    lx.skip_ws();
    const std::size_t at = lx.pos;
    if (!lx.peek_name()) throw ParseError("expected a tensor factor", at);
    const std::string head = lx.name();
    if (head == "CD") {
      lx.expect('[', "after CD");
      std::string idx = index();
      lx.expect(']', "closing the CD index");
      RawFactor inner;
      if (lx.accept('@')) {
        inner = factor();
      } else if (lx.accept('[')) {
        inner = factor();
        lx.expect(']', "closing the CD argument");
      } else if (lx.accept('(')) {
        inner = factor();
        lx.expect(')', "closing the CD argument");
      } else {
        throw ParseError("expected '[', '(' or '@' after CD[...]", lx.pos);
      }
      if (inner.eps) throw ParseError("derivative of the epsilon tensor vanishes", at);
      inner.derivs.push_back(idx);  // outermost derivative applied last
      return inner;
    }
    RawFactor f;
    f.pos = at;
    if (head == "R") {
      if (lx.accept('[')) {
        f.riemann = index_list(4);
        if (lx.accept(';')) f.derivs = index_list(0);
        lx.expect(']', "closing R[...]");
      } else {
        const std::string d1 = fresh_name(), d2 = fresh_name();
        f.riemann = {d1, d2, d1, d2};  // scalar curvature: double trace
      }
    } else if (head == "Ricci") {
      lx.expect('[', "after Ricci");
      auto ab = index_list(2);
      lx.expect(']', "closing Ricci[...]");
      const std::string d = fresh_name();
      f.riemann = {d, ab[0], d, ab[1]};  // trace of slots 1 and 3
    } else if (head == "RicciScalar") {
      const std::string d1 = fresh_name(), d2 = fresh_name();
      f.riemann = {d1, d2, d1, d2};
    } else if (head == "eps") {
      lx.expect('[', "after eps");
      f.riemann = index_list(4);
      lx.expect(']', "closing eps[...]");
      f.eps = true;
    } else {
      throw ParseError("unknown tensor head '" + head + "'", at);
    }
    return f;
  }

  ParsedTerm term() {
    ParsedTerm t;
    t.coeff = 1;
    if (lx.peek_digit()) {
      Int num = lx.integer();
      Int den = 1;
      if (lx.accept('/')) den = lx.integer();
      if (den == 0) throw ParseError("zero denominator", lx.pos);
      t.coeff = Rational(num, den);
      t.coeff.canonicalize();
      lx.expect('*', "after a coefficient");
    }
    std::vector<RawFactor> factors;
    factors.push_back(factor());
    while (lx.accept('*')) factors.push_back(factor());
    t.mono = assemble(factors);
    return t;
  }

  Monomial assemble(std::vector<RawFactor>& factors) {
    int eps_count = 0;
    for (const auto& f : factors) eps_count += f.eps;
    if (eps_count > 1)
      throw ParseError("at most one eps factor per monomial is supported", lx.pos);
    // Tensor factors in nondecreasing derivative order, eps slots at the end.
    std::stable_sort(factors.begin(), factors.end(), [](const RawFactor& a, const RawFactor& b) {
      if (a.eps != b.eps) return !a.eps;
      return a.lambda() < b.lambda();
    });
    Case cs;
    cs.dual = eps_count > 0;
    for (const auto& f : factors)
      if (!f.eps) cs.lambdas.push_back(static_cast<std::uint8_t>(f.lambda()));
    if (cs.lambdas.empty()) throw ParseError("monomial needs a curvature factor", lx.pos);

    std::vector<std::string> slot_names;
    for (const auto& f : factors) {
      for (const auto& s : f.riemann) slot_names.push_back(s);
      for (const auto& s : f.derivs) slot_names.push_back(s);
    }
    std::map<std::string, std::vector<int>> uses;
    for (std::size_t s = 0; s < slot_names.size(); ++s)
      uses[slot_names[s]].push_back(static_cast<int>(s));

    Monomial m;
    m.cs = cs;
    m.pairing.assign(slot_names.size(), 0);
    for (const auto& [nm, at] : uses) {
      if (at.size() != 2)
        throw ParseError("index '" + nm + "' must appear exactly twice, found " +
                             std::to_string(at.size()),
                         lx.pos);
      m.pairing[at[0]] = static_cast<std::uint8_t>(at[1]);
      m.pairing[at[1]] = static_cast<std::uint8_t>(at[0]);
    }
    return m;
  }

  std::vector<ParsedTerm> expression() {
    std::vector<ParsedTerm> out;
    bool negative = false;
    if (lx.accept('-')) negative = true;
    else lx.accept('+');
    for (;;) {
      ParsedTerm t = term();
      if (negative) t.coeff = -t.coeff;
      out.push_back(std::move(t));
      if (lx.eof()) break;
      if (lx.accept('-')) negative = true;
      else if (lx.accept('+')) negative = false;
      else throw ParseError("expected '+', '-' or end of input", lx.pos);
    }
    return out;
  }
};

char letter_for(int k) { return static_cast<char>('a' + k); }

}  // namespace

std::vector<ParsedTerm> parse_expression(const std::string& text) {
  Parser p{Lexer{text}};
  auto out = p.expression();
  if (!p.lx.eof()) throw ParseError("trailing input", p.lx.pos);
  return out;
}

std::string print_monomial(const Monomial& m) {
  const int n = m.cs.slot_count();
  std::vector<int> letter(n, -1);
  int next = 0;
  for (int s = 0; s < n; ++s) {
    if (letter[s] >= 0) continue;
    letter[s] = letter[m.pairing[s]] = next++;
  }
  const auto spans = factor_spans(m.cs);
  std::string out;
  for (std::size_t f = 0; f < spans.size(); ++f) {
    if (f) out += " * ";
    const auto& sp = spans[f];
    // Scalar-curvature shorthand for a lone fully traced underived factor.
    if (m.cs.degree() == 1 && !m.cs.dual && sp.lambda == 0 &&
        m.pairing[sp.riemann(0)] == sp.riemann(2)) {
      out += "R";
      continue;
    }
    out += "R[";
    for (int i = 0; i < 4; ++i) {
      if (i) out += ',';
      out += letter_for(letter[sp.riemann(i)]);
    }
    if (sp.lambda) {
      out += ';';
      for (int k = 0; k < sp.lambda; ++k) {
        if (k) out += ',';
        out += letter_for(letter[sp.deriv(k)]);
      }
    }
    out += ']';
  }
  if (m.cs.dual) {
    out += " * eps[";
    for (int i = 0; i < 4; ++i) {
      if (i) out += ',';
      out += letter_for(letter[eps_begin(m.cs) + i]);
    }
    out += ']';
  }
  return out;
}

std::string print_coefficient(const Rational& q, bool leading) {
  std::string sign = q < 0 ? (leading ? "-" : "- ") : (leading ? "" : "+ ");
  const Rational a = abs(q);
  if (a == 1) return sign;
  return sign + to_string(a) + " * ";
}

std::string print_combination(const std::vector<std::pair<Rational, Monomial>>& terms) {
  if (terms.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i) out += ' ';
    out += print_coefficient(terms[i].first, i == 0);
    out += print_monomial(terms[i].second);
  }
  return out;
}

}  // namespace rinv
