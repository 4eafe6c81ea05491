#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "rinv/canonical.hpp"
#include "rinv/lincomb.hpp"
#include "rinv/monomial.hpp"

namespace rinv {

// Sorting priorities for the indexed invariants of a case: more fully traced
// (differentiated Ricci scalar) factors first, then more singly traced
// (Ricci tensor) factors, then more contracted adjacent derivative pairs
// (Laplacians), ties by the canonical pairing order.
struct SortKey {
  int ricci_scalars = 0;
  int ricci_tensors = 0;
  int laplacians = 0;
};
SortKey sort_key(const Case& c, const Pairing& p);
bool entry_order_less(const Case& c, const Pairing& a, const Pairing& b);

// The indexed canonical invariants of one case. Entries exclude products;
// `canon` counts every nonzero canonical form including products.
class CaseTable {
 public:
  Case cs;
  std::uint64_t canon = 0;
  std::vector<Pairing> entries;  // 1-based indexing: entries[i-1]

  std::int64_t invars() const { return static_cast<std::int64_t>(entries.size()); }

  // 1-based index of a canonical non-product pairing, 0 if absent.
  std::int32_t index_of(const Pairing& p) const;

  void write(std::ostream& os) const;
  static CaseTable read(std::istream& is);

 private:
  mutable std::unordered_map<std::string, std::int32_t> index_;  // built lazily
};

// Full orbit partition of the matching space of a case: every pairing rank
// maps to its orbit, with the sign relating it to the orbit seed. Built by
// BFS over the generator action, which both enumerates the case completely
// and makes later canonicalization of arbitrary pairings of the case a table
// lookup. Memory is ~5 bytes per perfect matching, so the slot bound guards
// the (n-1)!! growth.
class CaseScan {
 public:
  // Throws ResourceLimitError when slot_count exceeds max_slots.
  static CaseScan enumerate(const Case& c, int max_slots = 16);

  const Case& the_case() const { return cs_; }
  const CaseTable& table() const { return table_; }

  enum class Kind : std::uint8_t { Zero, Entry, Product };
  struct Resolution {
    Kind kind = Kind::Zero;
    std::int32_t index = 0;  // for Entry
    int sign = 0;            // value(p) = sign * value(canonical rep)
    std::uint64_t rep_rank = 0;
  };
  Resolution resolve(const Pairing& p) const;
  Pairing rep_pairing(std::uint64_t rep_rank) const;

 private:
  Case cs_;
  CaseTable table_;
  struct Orbit {
    std::uint64_t rep_rank = 0;
    std::int32_t entry = 0;  // 1-based entry, 0 = zero orbit, -1 = product
    std::int8_t rep_sign = 1;  // value(rep) = rep_sign * value(seed)
  };
  std::vector<Orbit> orbits_;
  std::vector<std::int32_t> orbit_of_;  // per pairing rank
  std::vector<std::int8_t> sign_seed_;  // value(rank) = sign * value(seed)
};

}  // namespace rinv
