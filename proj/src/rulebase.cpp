#include "rinv/rulebase.hpp"

#include <algorithm>
#include <stdexcept>

namespace rinv {

void RuleBase::substitute(LinComb& x, const InvariantId& pivot, const LinComb& rhs) const {
  auto it = x.terms.find(pivot);
  if (it != x.terms.end()) {
    const Rational c = it->second;
    x.terms.erase(it);
    x.add_scaled(rhs, c);
  }
  // Product terms containing the pivot expand distributively.
  for (auto pit = x.products.begin(); pit != x.products.end();) {
    const auto hit = std::find(pit->first.begin(), pit->first.end(), pivot);
    if (hit == pit->first.end()) {
      ++pit;
      continue;
    }
    ProductKey rest = pit->first;
    rest.erase(rest.begin() + (hit - pit->first.begin()));
    const Rational c = pit->second;
    pit = x.products.erase(pit);
    for (const auto& [tid, tc] : rhs.terms) {
      ProductKey k = rest;
      k.push_back(tid);
      x.add_product(std::move(k), c * tc);
    }
    for (const auto& [pk, pc] : rhs.products) {
      ProductKey k = rest;
      k.insert(k.end(), pk.begin(), pk.end());
      x.add_product(std::move(k), c * pc);
    }
    pit = x.products.begin();  // iterators invalidated by add_product
  }
}

LinComb RuleBase::reduce(LinComb x, int* rounds) const {
  int subs = 0;
  for (;;) {
    // Descending sweep over single ids: substituting the current greatest
    // reducible id only ever inserts strictly smaller ones, so one sweep
    // settles them all.
    auto it = x.terms.end();
    while (it != x.terms.begin()) {
      --it;
      if (!reducible(it->first)) continue;
      const InvariantId id = it->first;
      const Rational c = it->second;
      x.terms.erase(it);
      x.add_scaled(rules_.at(id).rhs, c);
      ++subs;
      it = x.terms.lower_bound(id);
    }
    // Expand one reducible component inside a product, then resweep: the
    // expansion can surface new single ids below anything processed.
    const InvariantId* piv = nullptr;
    for (const auto& [key, c] : x.products) {
      for (const auto& id : key)
        if (reducible(id)) {
          piv = &id;
          break;
        }
      if (piv) break;
    }
    if (!piv) break;
    if (++subs > 2000000) throw std::logic_error("rule application did not reach a fixed point");
    const InvariantId p = *piv;
    substitute(x, p, rules_.at(p).rhs);
  }
  if (rounds) *rounds = subs;
  return x;
}

std::optional<InvariantId> RuleBase::eliminate(const LinComb& relation, Step step) {
  LinComb r = reduce(relation);
  if (r.terms.empty()) return std::nullopt;
  const auto piv = std::prev(r.terms.end());
  const InvariantId pivot = piv->first;
  const Rational lead = piv->second;
  r.terms.erase(std::prev(r.terms.end()));
  r.scale(-1 / lead);
  if (mode_ == StoreMode::Expanded)
    for (auto& [id, rule] : rules_) substitute(rule.rhs, pivot, r);
  rules_.emplace(pivot, Rule{std::move(r), step});
  return pivot;
}

void RuleBase::insert_raw(const InvariantId& pivot, Rule rule) {
  rules_[pivot] = std::move(rule);
}

}  // namespace rinv
