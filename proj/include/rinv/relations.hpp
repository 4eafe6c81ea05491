#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "rinv/case_table.hpp"
#include "rinv/lincomb.hpp"

namespace rinv {

class DependencyError : public std::runtime_error {
 public:
  explicit DependencyError(const Case& missing)
      : std::runtime_error("case table not built: " + missing.str()), missing_case(missing) {}
  Case missing_case;
};

enum class Step { Cyclic, Bianchi, Commute, DimDep, Dual };
const char* step_name(Step s);
Step step_from_name(const std::string& name);

struct Relation {
  Step step = Step::Cyclic;
  LinComb comb;  // = 0
};

// The built case scans a relation generator resolves its terms against.
class TableSet {
 public:
  void add(std::shared_ptr<const CaseScan> scan);
  const CaseScan* find(const Case& c) const;
  const CaseScan& need(const Case& c) const;
  bool has(const Case& c) const { return find(c) != nullptr; }

  // Adds coeff * value(m) to out: canonicalizes through the case scan,
  // drops vanishing monomials, splits disconnected ones into a product of
  // component invariants (every component resolved via its own case).
  void accumulate(LinComb& out, const Rational& coeff, const Monomial& m) const;

  const std::map<Case, std::shared_ptr<const CaseScan>>& scans() const { return scans_; }

 private:
  std::map<Case, std::shared_ptr<const CaseScan>> scans_;
};

// Step 2: full antisymmetrization over every 3-subset of each factor's four
// curvature slots, one candidate relation per (factor, subset); canonicalized
// duplicates and empty sums are dropped.
std::vector<Relation> cyclic_relations(const TableSet& ts, const InvariantId& id);

// Step 3: for each differentiated factor, antisymmetrization of the innermost
// derivative slot with either curvature slot pair.
std::vector<Relation> bianchi_relations(const TableSet& ts, const InvariantId& id);

// Step 4: for each adjacent derivative pair of each factor, original minus
// swapped minus curvature corrections; corrections replace the pair by a new
// contracted curvature factor, with the outer derivatives Leibniz-distributed
// over the two factors. Correction terms live in the degree n+1 cases of the
// same order stratum.
std::vector<Relation> commutation_relations(const TableSet& ts, const InvariantId& id);

// Step 5: antisymmetrization over every (dimension+1)-subset of the slots.
std::vector<Relation> dimdep_relations(const TableSet& ts, const InvariantId& id,
                                       int dimension = 4);

// Step 6: product of two dual invariants expanded through the epsilon-pair
// determinant into the merged nondual case; signature_sign is -1 Lorentzian,
// +1 Euclidean.
Relation dual_pair_relation(const TableSet& ts, const InvariantId& a, const InvariantId& b,
                            int signature_sign);

// Relations generated for one table entry at one step, in deterministic
// enumeration order, deduplicated up to overall scale.
std::vector<Relation> step_relations(const TableSet& ts, const InvariantId& id, Step step,
                                     int dimension);

}  // namespace rinv
