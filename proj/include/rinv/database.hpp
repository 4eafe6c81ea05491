#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rinv/canonical.hpp"
#include "rinv/case_table.hpp"
#include "rinv/expr.hpp"
#include "rinv/oracle.hpp"
#include "rinv/relations.hpp"
#include "rinv/rulebase.hpp"

namespace rinv {

struct BuildParams {
  int max_lambda = 6;
  bool dual_family = false;  // build the dual tables as the primary target
  int dimension = 4;
  int signature = -1;  // -1 Lorentzian, +1 Euclidean; enters the dual step only
  StoreMode mode = StoreMode::Expanded;
  int max_slots = 16;
  std::string out_dir;  // empty: in-memory build, nothing persisted
  bool resume = false;  // reuse complete relation files found in out_dir
  // Stop after this step (the cyclic and Bianchi steps are local to a case;
  // later steps mix cases and need whole strata).
  Step max_step = Step::Dual;
  // Restrict the build to these cases only; requires max_step <= Bianchi.
  std::vector<Case> only_cases;
  std::function<void(const std::string&)> log;
};

// Independent invariants of one case after each step; -1 marks a column that
// does not exist for the family (dual cases stop at the dimension step).
struct CaseCounts {
  std::int64_t canon = 0;
  std::int64_t invars = 0;
  std::int64_t cyclic = -1;
  std::int64_t bianchi = -1;
  std::int64_t commute = -1;
  std::int64_t dimdep = -1;
  std::int64_t duals = -1;

  std::int64_t column(const std::string& name) const;  // throws on unknown name
  friend bool operator==(const CaseCounts&, const CaseCounts&) = default;
};

struct Database {
  int format = 1;
  int max_lambda = 0;
  int dual_max_lambda = 0;
  bool dual_family = false;
  int dimension = 4;
  int signature = -1;
  StoreMode mode = StoreMode::Expanded;
  std::map<Case, CaseTable> tables;
  RuleBase rules;
  std::map<Case, CaseCounts> counts;
  std::string dir;  // where it was persisted/loaded from, empty if in-memory

  const CaseTable* table(const Case& c) const;
  Monomial monomial_of(const InvariantId& id) const;
  std::vector<InvariantId> survivors(const Case& c) const;
};

// Every case of the family with order <= max_lambda, stratified by order and
// degree-descending inside each stratum (the processing order).
std::vector<Case> cases_up_to(int max_lambda, bool dual);

Database build_database(const BuildParams& p);
Database load_database(const std::string& dir);  // validates version + checksums

// Term line serialization shared by relation and rule files (documented in
// docs/FORMATS.md, exercised by the golden-file test).
std::string lincomb_to_text(const LinComb& c);
LinComb lincomb_from_text(const std::string& line);

// Reduction of parsed expressions over a database.
class UnsupportedCaseError : public std::runtime_error {
 public:
  explicit UnsupportedCaseError(const Case& c)
      : std::runtime_error("case " + c.str() + " is not covered by the database"), cs(c) {}
  Case cs;
};

class Simplifier {
 public:
  explicit Simplifier(const Database& db) : db_(db) {}

  struct Result {
    LinComb comb;
    int rounds = 0;  // substitution count performed by rule application
  };
  // Splits every term into connected components, canonicalizes each against
  // the database tables, and applies the rule base to a fixed point.
  Result simplify(const std::vector<ParsedTerm>& terms);
  // Canonical combination without rule application.
  LinComb canonical_combination(const std::vector<ParsedTerm>& terms);

  std::string render(const LinComb& comb) const;

 private:
  const Database& db_;
  GroupCache groups_;
};

// Oracle sweep over every relation stored in a database directory: each one
// must evaluate to exactly zero on the seeded metrics. Relations touching
// derivative orders beyond max_deriv are skipped (and counted).
struct VerifyReport {
  std::int64_t checked = 0;
  std::int64_t skipped = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};
VerifyReport verify_database(const std::string& dir, const std::vector<std::uint64_t>& seeds,
                             int max_deriv, const std::function<void(const std::string&)>& log = {});

}  // namespace rinv
