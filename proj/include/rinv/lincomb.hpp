#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "rinv/monomial.hpp"
#include "rinv/rational.hpp"

namespace rinv {

// One canonical invariant: 1-based index into its case table.
struct InvariantId {
  Case cs;
  std::int32_t index = 0;

  friend bool operator==(const InvariantId&, const InvariantId&) = default;
  std::string str() const { return "I[" + cs.str() + ";" + std::to_string(index) + "]"; }
};

// Elimination order. Smaller survives, the greatest id in a relation is the
// pivot. Within one order stratum higher-degree cases rank lower, so
// commutation corrections (which raise the degree) outlive the invariants
// generating them; ties break by lambda tuple, family, then table index.
inline int global_order_cmp(const InvariantId& a, const InvariantId& b) {
  const int la = a.cs.order(), lb = b.cs.order();
  if (la != lb) return la < lb ? -1 : 1;
  const int na = a.cs.degree(), nb = b.cs.degree();
  if (na != nb) return na > nb ? -1 : 1;
  if (a.cs.lambdas != b.cs.lambdas) return a.cs.lambdas < b.cs.lambdas ? -1 : 1;
  if (a.cs.dual != b.cs.dual) return !a.cs.dual ? -1 : 1;
  if (a.index != b.index) return a.index < b.index ? -1 : 1;
  return 0;
}

struct GlobalOrderLess {
  bool operator()(const InvariantId& a, const InvariantId& b) const {
    return global_order_cmp(a, b) < 0;
  }
};

// Multiset of component invariants of a factorized product, sorted.
using ProductKey = std::vector<InvariantId>;

struct ProductKeyLess {
  bool operator()(const ProductKey& a, const ProductKey& b) const {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
      const int c = global_order_cmp(a[i], b[i]);
      if (c) return c < 0;
    }
    return a.size() < b.size();
  }
};

// Sparse rational combination of invariants and of products of invariants.
// Zero coefficients are never stored.
struct LinComb {
  std::map<InvariantId, Rational, GlobalOrderLess> terms;
  std::map<ProductKey, Rational, ProductKeyLess> products;

  bool empty() const { return terms.empty() && products.empty(); }

  void add(const InvariantId& id, const Rational& c) {
    if (c == 0) return;
    auto [it, fresh] = terms.emplace(id, c);
    if (!fresh && (it->second += c) == 0) terms.erase(it);
  }

  void add_product(ProductKey key, const Rational& c) {
    if (c == 0) return;
    if (key.size() == 1) {
      add(key[0], c);
      return;
    }
    std::sort(key.begin(), key.end(), GlobalOrderLess{});
    auto [it, fresh] = products.emplace(std::move(key), c);
    if (!fresh && (it->second += c) == 0) products.erase(it);
  }

  LinComb& operator+=(const LinComb& o) {
    for (const auto& [id, c] : o.terms) add(id, c);
    for (const auto& [k, c] : o.products) {
      auto [it, fresh] = products.emplace(k, c);
      if (!fresh && (it->second += c) == 0) products.erase(it);
    }
    return *this;
  }

  void scale(const Rational& c) {
    if (c == 0) {
      terms.clear();
      products.clear();
      return;
    }
    for (auto& [id, v] : terms) v *= c;
    for (auto& [k, v] : products) v *= c;
  }

  void add_scaled(const LinComb& o, const Rational& c) {
    if (c == 0) return;
    for (const auto& [id, v] : o.terms) add(id, v * c);
    for (const auto& [k, v] : o.products) {
      auto [it, fresh] = products.emplace(k, v * c);
      if (!fresh && (it->second += v * c) == 0) products.erase(it);
    }
  }

  friend bool operator==(const LinComb&, const LinComb&) = default;
};

}  // namespace rinv
