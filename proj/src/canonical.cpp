#include "rinv/canonical.hpp"

#include <algorithm>
#include <cstring>
#include <unordered_set>

namespace rinv {

namespace {

struct Cand {
  std::vector<std::uint8_t> u;     // coset representative, slots + sign pair
  std::vector<std::uint8_t> upos;  // inverse images: upos[u[i]] = i
};

Cand extend(const Cand& c, const SignedPerm& t) {
  const std::size_t n = c.u.size();
  Cand out;
  out.u.resize(n);
  out.upos.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.u[i] = c.u[t(static_cast<int>(i))];
  for (std::size_t i = 0; i < n; ++i) out.upos[out.u[i]] = static_cast<std::uint8_t>(i);
  return out;
}

// Does g conjugate p to itself (any sign)?
bool stabilizes(const Pairing& p, const std::vector<std::uint8_t>& g) {
  for (std::size_t s = 0; s < p.size(); ++s)
    if (p[g[s]] != g[p[s]]) return false;
  return true;
}

}  // namespace

CanonicalForm canonicalize_pairing(const Pairing& p, const SignedBsgs& group,
                                   std::size_t beam_limit) {
  const int n = static_cast<int>(p.size());
  if (group.slots() != n) throw std::invalid_argument("group/pairing slot mismatch");
  const int sentinel = n;

  std::vector<Cand> beam(1);
  beam[0].u.resize(n + 2);
  beam[0].upos.resize(n + 2);
  for (int i = 0; i < n + 2; ++i) beam[0].u[i] = beam[0].upos[i] = static_cast<std::uint8_t>(i);

  bool auto_sign_minus = group.minus_identity_member();

  std::vector<Cand> next;
  std::unordered_set<std::string> seen;  // exact image prefixes
  std::vector<std::pair<int, const SignedPerm*>> picks;  // (beam index, transversal)

  for (int level = 0; level < n; ++level) {
    const auto& orbit = group.basic_orbit(level);
    int best = sentinel + 1;
    picks.clear();
    for (std::size_t ci = 0; ci < beam.size(); ++ci) {
      const Cand& c = beam[ci];
      for (int x : orbit) {
        const int a = c.u[x];
        const int j = c.upos[p[a]];
        const int score = j < level ? j : sentinel;
        if (score > best) continue;
        if (score < best) {
          best = score;
          picks.clear();
        }
        picks.emplace_back(static_cast<int>(ci), &group.transversal(level, x));
      }
    }

    next.clear();
    seen.clear();
    for (const auto& [ci, t] : picks) {
      Cand c = extend(beam[ci], *t);
      // Same image prefix means same coset: identical futures, keep one.
      std::string prefix(reinterpret_cast<const char*>(c.u.data()),
                         static_cast<std::size_t>(level) + 1);
      if (!seen.insert(std::move(prefix)).second) continue;
      if (!next.empty()) {
        // gamma maps the first kept candidate's prefix onto c's. When it
        // stabilizes the pairing, c's whole subtree is the gamma-image of
        // the first one: drop it, remember the sign.
        std::vector<std::uint8_t> gamma(n + 2);
        for (int i = 0; i < n + 2; ++i) gamma[next[0].u[i]] = c.u[i];
        if (stabilizes(p, gamma)) {
          if (gamma[n] != static_cast<std::uint8_t>(n)) auto_sign_minus = true;
          continue;
        }
      }
      next.push_back(std::move(c));
      if (next.size() > beam_limit)
        throw ResourceLimitError("canonicalization beam limit exceeded");
    }
    beam.swap(next);
  }

  CanonicalForm out;
  out.canonical.resize(n);
  const Cand& w = beam.front();
  for (int i = 0; i < n; ++i) out.canonical[i] = w.upos[p[w.u[i]]];

  // value(p) = sign(u) * value(canonical) for every witness u; conflicting
  // achievable signs force the invariant to vanish.
  bool plus = false, minus = false;
  for (const Cand& c : beam) {
    const bool neg = c.u[n] != static_cast<std::uint8_t>(n);
    (neg ? minus : plus) = true;
  }
  if (auto_sign_minus || (plus && minus)) out.sign = 0;
  else out.sign = plus ? 1 : -1;
  return out;
}

const SignedBsgs& GroupCache::group(const Case& c) {
  auto it = cache_.find(c);
  if (it == cache_.end()) {
    auto g = std::make_unique<SignedBsgs>(
        SignedBsgs::build(c.slot_count(), slot_symmetry_generators(c)));
    it = cache_.emplace(c, std::move(g)).first;
  }
  return *it->second;
}

std::vector<std::pair<Rational, Monomial>> canonicalize_combination(
    const std::vector<std::pair<Rational, Monomial>>& terms, GroupCache& groups) {
  std::map<std::pair<Case, Pairing>, Rational> acc;
  for (const auto& [coeff, mono] : terms) {
    const CanonicalMonomial c = canonicalize(mono, groups.group(mono.cs));
    if (c.sign == 0 || coeff == 0) continue;
    auto key = std::make_pair(c.canonical.cs, c.canonical.pairing);
    auto [it, fresh] = acc.emplace(std::move(key), coeff * c.sign);
    if (!fresh && (it->second += coeff * c.sign) == 0) acc.erase(it);
  }
  std::vector<std::pair<Rational, Monomial>> out;
  out.reserve(acc.size());
  for (auto& [key, coeff] : acc)
    out.emplace_back(coeff, Monomial{key.first, key.second});
  return out;
}

}  // namespace rinv
