#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "rinv/permutation.hpp"
#include "rinv/rational.hpp"

namespace rinv {

// Base and strong generating set for a signed permutation group on slots
// {0..m-1}. The base is fixed as (0, 1, ..., m-1, m): every slot in ascending
// order followed by the first sign point, so level l is the pointwise
// stabilizer of slots 0..l-1 and the chain always terminates in the trivial
// group. The ascending slot base is what the canonical-form search walks.
class SignedBsgs {
 public:
  // Deterministic Schreier-Sims; throws std::invalid_argument when the
  // generators act on differing slot counts.
  static SignedBsgs build(int slots, const std::vector<SignedPerm>& generators);

  int slots() const { return slots_; }
  int base_length() const { return slots_ + 1; }
  int base_point(int level) const { return level; }

  // Exact group order (doubles once more when -identity is a member).
  Int order() const;

  bool contains(const SignedPerm& g) const;

  // Membership of the underlying slot permutation with each sign choice.
  // Both true forces any object stabilized by g to vanish.
  struct SignMembership {
    bool plus = false;
    bool minus = false;
  };
  SignMembership signed_membership(const SignedPerm& g) const;

  bool minus_identity_member() const;

  // Calls fn for every strong generator of the level stabilizer (the ones
  // stored at this level and every deeper one).
  void for_level_gens(int level, const std::function<void(const SignedPerm&)>& fn) const;
  // Basic orbit of base point `level` under the level stabilizer, in
  // deterministic BFS discovery order.
  const std::vector<int>& basic_orbit(int level) const { return levels_[level].orbit; }
  bool in_basic_orbit(int level, int point) const {
    return levels_[level].where[point] >= 0;
  }
  // u with u(base_point(level)) = point, for point in the basic orbit.
  const SignedPerm& transversal(int level, int point) const {
    return levels_[level].transversal[levels_[level].where[point]];
  }

  const std::vector<SignedPerm>& strong_generators() const { return strong_; }

 private:
  struct Level {
    std::vector<SignedPerm> gens;
    std::vector<int> orbit;
    std::vector<int> where;  // point -> index into orbit, -1 outside
    std::vector<SignedPerm> transversal;
  };

  void recompute_orbit(int level);
  bool complete_from(int level);  // true when new strong generators appeared
  // Strips g through levels >= from; returns residual and the level it
  // belongs to, or nullopt when g sifts to the identity.
  std::optional<std::pair<int, SignedPerm>> sift(SignedPerm g, int from) const;

  int slots_ = 0;
  std::vector<Level> levels_;
  std::vector<SignedPerm> strong_;
};

}  // namespace rinv
