#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "rinv/permutation.hpp"

namespace rinv {

// A case {lambda_1,...,lambda_n}: the nondecreasing multiset of derivative
// orders of the n curvature factors, plus a flag for one epsilon factor.
struct Case {
  std::vector<std::uint8_t> lambdas;  // nondecreasing
  bool dual = false;

  int degree() const { return static_cast<int>(lambdas.size()); }
  int lambda_sum() const {
    int s = 0;
    for (auto l : lambdas) s += l;
    return s;
  }
  // Number of index slots: 4 per factor plus derivatives, plus 4 for epsilon.
  int slot_count() const { return 4 * degree() + lambda_sum() + (dual ? 4 : 0); }
  // Order in metric derivatives.
  int order() const { return 2 * degree() + lambda_sum(); }

  bool well_formed() const {
    if (lambdas.empty()) return false;
    for (std::size_t i = 1; i < lambdas.size(); ++i)
      if (lambdas[i - 1] > lambdas[i]) return false;
    return true;
  }

  friend auto operator<=>(const Case&, const Case&) = default;

  std::string str() const;                      // "0,1,3" or "0,1,3*"
  static Case parse(const std::string& text);   // throws on malformed input
};

// Slot layout of one factor inside a monomial: four curvature slots followed
// by lambda derivative slots, innermost derivative first.
struct FactorSpan {
  int begin = 0;
  int lambda = 0;
  int size() const { return 4 + lambda; }
  int riemann(int i) const { return begin + i; }       // i in 0..3
  int deriv(int k) const { return begin + 4 + k; }     // k in 0..lambda-1
};

std::vector<FactorSpan> factor_spans(const Case& c);
// First epsilon slot, or -1 for nondual cases.
int eps_begin(const Case& c);
// Factor index of a slot, or degree() for epsilon slots.
int factor_of_slot(const Case& c, int slot);

// Perfect matching on the slots: pairing[s] = slot contracted with s.
using Pairing = std::vector<std::uint8_t>;

inline bool pairing_well_formed(const Pairing& p) {
  const int n = static_cast<int>(p.size());
  if (n % 2) return false;
  for (int i = 0; i < n; ++i)
    if (p[i] >= n || p[i] == i || p[p[i]] != i) return false;
  return true;
}

// Contraction structure of one scalar monomial. The overall rational weight
// lives with the term, not here; canonicalization reports a sign in {0,+1,-1}
// relating a monomial to its canonical representative.
struct Monomial {
  Case cs;
  Pairing pairing;

  bool well_formed() const {
    return cs.well_formed() && static_cast<int>(pairing.size()) == cs.slot_count() &&
           pairing_well_formed(pairing);
  }

  friend bool operator==(const Monomial&, const Monomial&) = default;
};

// Conjugates the pairing by a slot permutation: contents of slot s move to
// slot g(s), contraction partners follow.
Pairing conjugate(const Pairing& p, const SignedPerm& g);

// Generators of the slot-symmetry group: per factor the two antisymmetric
// swaps and the pair exchange, signed transpositions on the epsilon block,
// and block exchanges between adjacent factors of equal derivative order.
// Derivative slots get no generators here; their permutation symmetries enter
// through the commutation relations instead.
std::vector<SignedPerm> slot_symmetry_generators(const Case& c);

// Partition of the factors (epsilon counts as an extra node attached to
// whatever it contracts into) by chains of contractions. component_of has
// degree()+1 entries for dual cases.
struct Components {
  std::vector<int> component_of;  // per factor node
  int count = 0;
};
Components connected_components(const Monomial& m);
bool is_product(const Monomial& m);

// Splits a product monomial into its connected component monomials. Factors
// of each component are re-sorted to nondecreasing lambda; the epsilon block
// stays with its component. Single component returns {m}.
std::vector<Monomial> split_components(const Monomial& m);

// Inverse direction: one block-diagonal monomial holding all the parts'
// factors (sorted) and contractions. At most one part may be dual.
Monomial merge_monomials(const std::vector<Monomial>& parts);

}  // namespace rinv
