#pragma once

// Test-only oracles, all independent of the library's group-search and
// elimination paths: brute-force closure enumeration, exhaustive orbit
// minimization, dense rational elimination.

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "rinv/monomial.hpp"
#include "rinv/pairing_order.hpp"
#include "rinv/permutation.hpp"
#include "rinv/rational.hpp"

namespace testsupport {

struct Rng {
  std::uint64_t state;
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
};

// Every element of the generated group, by multiplying until fixed point.
inline std::set<rinv::SignedPerm> closure(int slots,
                                          const std::vector<rinv::SignedPerm>& gens) {
  std::set<rinv::SignedPerm> seen{rinv::SignedPerm::identity(slots)};
  std::vector<rinv::SignedPerm> queue{rinv::SignedPerm::identity(slots)};
  for (std::size_t at = 0; at < queue.size(); ++at)
    for (const auto& g : gens) {
      rinv::SignedPerm h = g * queue[at];
      if (seen.insert(h).second) queue.push_back(h);
    }
  return seen;
}

struct BruteCanonical {
  rinv::Pairing canonical;
  int sign = 0;
};

// Exhaustive minimization over the whole group orbit, with vanishing
// detection from stabilizer signs.
inline BruteCanonical brute_canonical(const rinv::Pairing& p,
                                      const std::set<rinv::SignedPerm>& group) {
  BruteCanonical out;
  out.canonical = p;
  int best_sign = 1;
  bool zero = false;
  for (const auto& s : group) {
    const rinv::Pairing q = rinv::conjugate(p, s);
    if (q == p && s.sign() < 0) zero = true;
    if (rinv::pairing_canonical_less(q, out.canonical)) {
      out.canonical = q;
      best_sign = s.sign();
    }
  }
  // value(p) = sign(s) * value(s p s^-1) for the minimizing s.
  out.sign = zero ? 0 : best_sign;
  return out;
}

inline rinv::Pairing random_pairing(int n, Rng& rng) {
  std::vector<int> slots(n);
  for (int i = 0; i < n; ++i) slots[i] = i;
  rinv::Pairing p(n, 0);
  while (!slots.empty()) {
    const int a = slots[0];
    slots.erase(slots.begin());
    const int pick = rng.below(static_cast<int>(slots.size()));
    const int b = slots[pick];
    slots.erase(slots.begin() + pick);
    p[a] = static_cast<std::uint8_t>(b);
    p[b] = static_cast<std::uint8_t>(a);
  }
  return p;
}

// Rank of a dense rational matrix by plain Gaussian elimination.
inline int dense_rank(std::vector<std::vector<rinv::Rational>> m) {
  int rank = 0;
  const int rows = static_cast<int>(m.size());
  if (rows == 0) return 0;
  const int cols = static_cast<int>(m[0].size());
  for (int c = 0; c < cols && rank < rows; ++c) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r)
      if (m[r][c] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(m[rank], m[pivot]);
    for (int r = 0; r < rows; ++r) {
      if (r == rank || m[r][c] == 0) continue;
      const rinv::Rational f = m[r][c] / m[rank][c];
      for (int cc = c; cc < cols; ++cc) m[r][cc] -= f * m[rank][cc];
    }
    ++rank;
  }
  return rank;
}

}  // namespace testsupport
