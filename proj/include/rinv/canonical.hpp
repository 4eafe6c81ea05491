#pragma once

#include <map>
#include <memory>
#include <stdexcept>

#include "rinv/bsgs.hpp"
#include "rinv/monomial.hpp"
#include "rinv/pairing_order.hpp"

namespace rinv {

class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Canonical representative of the pairing's orbit under the slot-symmetry
// group, together with the sign relating the input to it:
//   value(input) = sign * value(canonical),
// sign 0 when some symmetry stabilizes the pairing with sign -1 (the
// invariant vanishes identically). Dummy-index freedom needs no explicit
// group: a pairing carries no index names, so relabeling is already
// quotiented out and only the slot group acts, by conjugation.
struct CanonicalForm {
  Pairing canonical;
  int sign = 0;
};

// Minimizes the back-partner word over the orbit by walking the stabilizer
// chain slot by slot: at each level every live coset is extended through the
// basic orbit, only extensions realizing the smallest next letter survive,
// and cosets are deduplicated by their image prefix. Each letter depends only
// on the prefix, so the greedy sweep is exact. Candidates that are images of
// an earlier one under a pairing automorphism are dropped with the
// automorphism's sign recorded; the surviving witnesses plus those signs
// decide zero detection. Throws ResourceLimitError when the live-coset count
// exceeds beam_limit.
CanonicalForm canonicalize_pairing(const Pairing& p, const SignedBsgs& group,
                                   std::size_t beam_limit = 1u << 20);

struct CanonicalMonomial {
  Monomial canonical;
  int sign = 0;
};

inline CanonicalMonomial canonicalize(const Monomial& m, const SignedBsgs& group,
                                      std::size_t beam_limit = 1u << 20) {
  CanonicalForm f = canonicalize_pairing(m.pairing, group, beam_limit);
  return CanonicalMonomial{Monomial{m.cs, std::move(f.canonical)}, f.sign};
}

// Case -> slot-symmetry BSGS, built on first use.
class GroupCache {
 public:
  const SignedBsgs& group(const Case& c);

 private:
  std::map<Case, std::unique_ptr<SignedBsgs>> cache_;
};

// Canonicalizes every term, merges equal canonical monomials, drops the ones
// that vanish; output ordered by (case, pairing) for stable printing.
std::vector<std::pair<Rational, Monomial>> canonicalize_combination(
    const std::vector<std::pair<Rational, Monomial>>& terms, GroupCache& groups);

}  // namespace rinv
