#include "rinv/pairing_order.hpp"

#include <stdexcept>

namespace rinv {

std::uint64_t matching_count(int n) {
  if (n % 2) return 0;
  std::uint64_t c = 1;
  for (int k = n - 1; k > 0; k -= 2) c *= static_cast<std::uint64_t>(k);
  return c;
}

std::uint64_t pairing_rank(const Pairing& p) {
  const int n = static_cast<int>(p.size());
  std::uint64_t rank = 0;
  // Weight of the k-th opened pair is (n-3-2k)!!: free slots shrink by two
  // per pair regardless of which partners were chosen.
  std::uint64_t weight = matching_count(n);
  std::uint32_t used = 0;
  int opened = 0;
  for (int s = 0; s < n; ++s) {
    if (used & (1u << s)) continue;
    const int partner = p[s];
    const std::uint32_t between = ~used & ((1u << partner) - 1u) & ~((2u << s) - 1u);
    weight /= static_cast<std::uint64_t>(n - 1 - 2 * opened);
    rank += static_cast<std::uint64_t>(__builtin_popcount(between)) * weight;
    used |= (1u << s) | (1u << partner);
    ++opened;
  }
  return rank;
}

Pairing pairing_unrank(int n, std::uint64_t rank) {
  Pairing p(n, 0);
  std::uint64_t weight = matching_count(n);
  std::uint32_t used = 0;
  for (int s = 0; s < n; ++s) {
    if (used & (1u << s)) continue;
    int free_after = 0;
    for (int t = s + 1; t < n; ++t)
      if (!(used & (1u << t))) ++free_after;
    if (free_after == 0) throw std::invalid_argument("odd slot count");
    weight /= static_cast<std::uint64_t>(free_after);
    int digit = static_cast<int>(rank / weight);
    rank %= weight;
    int partner = -1;
    for (int t = s + 1; t < n; ++t) {
      if (used & (1u << t)) continue;
      if (digit-- == 0) {
        partner = t;
        break;
      }
    }
    p[s] = static_cast<std::uint8_t>(partner);
    p[partner] = static_cast<std::uint8_t>(s);
    used |= (1u << s) | (1u << partner);
  }
  return p;
}

}  // namespace rinv
