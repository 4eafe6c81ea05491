#include "rinv/monomial.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace rinv {

std::string Case::str() const {
  std::string s;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(static_cast<int>(lambdas[i]));
  }
  if (dual) s += '*';
  return s;
}

Case Case::parse(const std::string& text) {
  Case c;
  std::string body = text;
  if (!body.empty() && body.back() == '*') {
    c.dual = true;
    body.pop_back();
  }
  std::size_t pos = 0;
  while (pos < body.size()) {
    std::size_t comma = body.find(',', pos);
    const std::string tok = body.substr(pos, comma == std::string::npos ? std::string::npos
                                                                        : comma - pos);
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("malformed case: " + text);
    const int v = std::stoi(tok);
    if (v > 200) throw std::invalid_argument("derivative order out of range: " + text);
    c.lambdas.push_back(static_cast<std::uint8_t>(v));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (!c.well_formed()) throw std::invalid_argument("malformed case: " + text);
  return c;
}

std::vector<FactorSpan> factor_spans(const Case& c) {
  std::vector<FactorSpan> spans;
  spans.reserve(c.lambdas.size());
  int at = 0;
  for (auto l : c.lambdas) {
    spans.push_back(FactorSpan{at, l});
    at += 4 + l;
  }
  return spans;
}

int eps_begin(const Case& c) {
  if (!c.dual) return -1;
  return 4 * c.degree() + c.lambda_sum();
}

int factor_of_slot(const Case& c, int slot) {
  int at = 0;
  for (int f = 0; f < c.degree(); ++f) {
    at += 4 + c.lambdas[f];
    if (slot < at) return f;
  }
  return c.degree();  // epsilon block
}

Pairing conjugate(const Pairing& p, const SignedPerm& g) {
  Pairing q(p.size());
  for (std::size_t s = 0; s < p.size(); ++s)
    q[g(static_cast<int>(s))] = static_cast<std::uint8_t>(g(p[s]));
  return q;
}

std::vector<SignedPerm> slot_symmetry_generators(const Case& c) {
  std::vector<SignedPerm> gens;
  const int m = c.slot_count();
  const auto spans = factor_spans(c);
  for (const auto& f : spans) {
    gens.push_back(SignedPerm::from_cycles(m, {{f.riemann(0), f.riemann(1)}}, -1));
    gens.push_back(SignedPerm::from_cycles(m, {{f.riemann(2), f.riemann(3)}}, -1));
    gens.push_back(SignedPerm::from_cycles(
        m, {{f.riemann(0), f.riemann(2)}, {f.riemann(1), f.riemann(3)}}, +1));
  }
  for (int i = 0; i + 1 < c.degree(); ++i) {
    if (c.lambdas[i] != c.lambdas[i + 1]) continue;
    std::vector<int> img(m);
    std::iota(img.begin(), img.end(), 0);
    for (int k = 0; k < spans[i].size(); ++k) {
      img[spans[i].begin + k] = spans[i + 1].begin + k;
      img[spans[i + 1].begin + k] = spans[i].begin + k;
    }
    gens.push_back(SignedPerm::from_images(img, +1));
  }
  if (c.dual) {
    const int e = eps_begin(c);
    for (int i = 0; i < 3; ++i)
      gens.push_back(SignedPerm::from_cycles(m, {{e + i, e + i + 1}}, -1));
  }
  return gens;
}

Components connected_components(const Monomial& m) {
  const int nodes = m.cs.degree() + (m.cs.dual ? 1 : 0);
  std::vector<int> parent(nodes);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int s = 0; s < m.cs.slot_count(); ++s) {
    const int a = find(factor_of_slot(m.cs, s));
    const int b = find(factor_of_slot(m.cs, m.pairing[s]));
    if (a != b) parent[a] = b;
  }
  Components out;
  out.component_of.resize(nodes);
  std::vector<int> label(nodes, -1);
  for (int i = 0; i < nodes; ++i) {
    const int r = find(i);
    if (label[r] < 0) label[r] = out.count++;
    out.component_of[i] = label[r];
  }
  return out;
}

bool is_product(const Monomial& m) { return connected_components(m).count > 1; }

std::vector<Monomial> split_components(const Monomial& m) {
  const Components comps = connected_components(m);
  if (comps.count == 1) return {m};
  const auto spans = factor_spans(m.cs);
  std::vector<Monomial> out;
  for (int cid = 0; cid < comps.count; ++cid) {
    // Factors of this component in nondecreasing lambda order; the input
    // case is already sorted, so stable selection preserves that.
    std::vector<int> factors;
    for (int f = 0; f < m.cs.degree(); ++f)
      if (comps.component_of[f] == cid) factors.push_back(f);
    const bool has_eps = m.cs.dual && comps.component_of[m.cs.degree()] == cid;
    Case sub;
    sub.dual = has_eps;
    for (int f : factors) sub.lambdas.push_back(m.cs.lambdas[f]);
    std::vector<int> to_new(m.cs.slot_count(), -1);
    int at = 0;
    for (int f : factors)
      for (int k = 0; k < spans[f].size(); ++k) to_new[spans[f].begin + k] = at++;
    if (has_eps)
      for (int k = 0; k < 4; ++k) to_new[eps_begin(m.cs) + k] = at++;
    Monomial sm;
    sm.cs = sub;
    sm.pairing.resize(sub.slot_count());
    for (int s = 0; s < m.cs.slot_count(); ++s)
      if (to_new[s] >= 0) sm.pairing[to_new[s]] = static_cast<std::uint8_t>(to_new[m.pairing[s]]);
    out.push_back(std::move(sm));
  }
  return out;
}

Monomial merge_monomials(const std::vector<Monomial>& parts) {
  struct Src {
    int lambda, part, factor;
  };
  std::vector<Src> srcs;
  int duals = 0;
  for (std::size_t p = 0; p < parts.size(); ++p) {
    duals += parts[p].cs.dual;
    for (int f = 0; f < parts[p].cs.degree(); ++f)
      srcs.push_back(Src{parts[p].cs.lambdas[f], static_cast<int>(p), f});
  }
  if (duals > 1) throw std::invalid_argument("cannot merge two dual monomials");
  std::stable_sort(srcs.begin(), srcs.end(),
                   [](const Src& a, const Src& b) { return a.lambda < b.lambda; });
  Case merged;
  merged.dual = duals > 0;
  for (const auto& s : srcs) merged.lambdas.push_back(static_cast<std::uint8_t>(s.lambda));

  std::vector<std::vector<int>> to_new(parts.size());
  for (std::size_t p = 0; p < parts.size(); ++p)
    to_new[p].assign(parts[p].cs.slot_count(), -1);
  const auto merged_spans = factor_spans(merged);
  for (std::size_t i = 0; i < srcs.size(); ++i) {
    const auto& s = srcs[i];
    const auto pspan = factor_spans(parts[s.part].cs)[s.factor];
    for (int k = 0; k < pspan.size(); ++k)
      to_new[s.part][pspan.begin + k] = merged_spans[i].begin + k;
  }
  for (std::size_t p = 0; p < parts.size(); ++p)
    if (parts[p].cs.dual)
      for (int k = 0; k < 4; ++k) to_new[p][eps_begin(parts[p].cs) + k] = eps_begin(merged) + k;

  Monomial out;
  out.cs = merged;
  out.pairing.assign(merged.slot_count(), 0);
  for (std::size_t p = 0; p < parts.size(); ++p)
    for (int s = 0; s < parts[p].cs.slot_count(); ++s)
      out.pairing[to_new[p][s]] = static_cast<std::uint8_t>(to_new[p][parts[p].pairing[s]]);
  return out;
}

}  // namespace rinv
