#pragma once

#include <cstdint>

#include "rinv/monomial.hpp"

namespace rinv {

// Total order on perfect matchings used for every canonical representative.
//
// A pairing is read as its back-partner word: slot s contributes partner(s)
// when partner(s) < s and a sentinel otherwise; words compare
// lexicographically with the sentinel largest. Minimizing this word slot by
// slot is what the canonical search does, so the minimum over a group orbit
// can be taken greedily without backtracking.
inline int back_partner_key(const Pairing& p, int s) {
  return p[s] < s ? p[s] : static_cast<int>(p.size());
}

inline bool pairing_canonical_less(const Pairing& a, const Pairing& b) {
  for (std::size_t s = 0; s < a.size(); ++s) {
    const int ka = back_partner_key(a, static_cast<int>(s));
    const int kb = back_partner_key(b, static_cast<int>(s));
    if (ka != kb) return ka < kb;
  }
  return false;
}

// Number of perfect matchings on n slots: (n-1)!! for even n.
std::uint64_t matching_count(int n);

// Bijection between pairings on n slots and 0..(n-1)!!-1. The digit at the
// k-th open slot is the position of its partner among the later free slots.
std::uint64_t pairing_rank(const Pairing& p);
Pairing pairing_unrank(int n, std::uint64_t rank);

}  // namespace rinv
