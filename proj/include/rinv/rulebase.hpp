#pragma once

#include <map>
#include <optional>

#include "rinv/lincomb.hpp"
#include "rinv/relations.hpp"

namespace rinv {

enum class StoreMode { Expanded, NonExpanded };

// One substitution rule: pivot = rhs, with rhs strictly lower in the global
// order (products may appear on the right; they are never pivots).
struct Rule {
  LinComb rhs;
  Step step = Step::Cyclic;
};

// Ordered triangular substitution system built by exact rational elimination
// with pivot = greatest id of each relation. In Expanded mode every stored
// right-hand side stays pivot-free (new rules are back-substituted); in
// NonExpanded mode rules keep whatever pivots they were born with and
// reduce() iterates to the fixed point.
class RuleBase {
 public:
  explicit RuleBase(StoreMode mode = StoreMode::Expanded) : mode_(mode) {}

  StoreMode mode() const { return mode_; }
  const std::map<InvariantId, Rule, GlobalOrderLess>& rules() const { return rules_; }
  const Rule* find(const InvariantId& id) const {
    auto it = rules_.find(id);
    return it == rules_.end() ? nullptr : &it->second;
  }
  bool reducible(const InvariantId& id) const { return rules_.count(id) != 0; }

  // Substitutes every reducible id, including inside product terms, until
  // none remains. Exact arithmetic; terminates because every substitution
  // strictly lowers ids. Reports the number of passes when asked.
  LinComb reduce(LinComb x, int* rounds = nullptr) const;

  // Reduces the relation and installs a rule for its greatest surviving id.
  // Returns the pivot, or nullopt when the relation was dependent (empty
  // residue, or product terms only, which never pivot).
  std::optional<InvariantId> eliminate(const LinComb& relation, Step step);

  void insert_raw(const InvariantId& pivot, Rule rule);  // deserialization

 private:
  void substitute(LinComb& x, const InvariantId& pivot, const LinComb& rhs) const;

  StoreMode mode_;
  std::map<InvariantId, Rule, GlobalOrderLess> rules_;
};

}  // namespace rinv
