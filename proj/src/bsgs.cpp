#include "rinv/bsgs.hpp"

#include <stdexcept>

namespace rinv {

SignedBsgs SignedBsgs::build(int slots, const std::vector<SignedPerm>& generators) {
  SignedBsgs g;
  g.slots_ = slots;
  g.levels_.resize(g.base_length());
  for (const auto& p : generators) {
    if (p.slots() != slots)
      throw std::invalid_argument("generator slot count mismatch");
    if (!p.is_identity()) g.levels_[0].gens.push_back(p);
  }
  // Deterministic fixpoint sweep: a residual discovered at level j enlarges
  // the stabilizers of every level <= j (generator lists are nested by
  // union over deeper levels), so sweep until a full pass stays quiet.
  bool changed = true;
  while (changed) {
    changed = false;
    for (int l = g.base_length() - 1; l >= 0; --l)
      if (g.complete_from(l)) changed = true;
  }
  for (const auto& lv : g.levels_)
    for (const auto& p : lv.gens) g.strong_.push_back(p);
  return g;
}

// Generators of the level stabilizer: everything stored at this level or
// deeper, since a generator fixing base points 0..j-1 fixes 0..l-1 for l<=j.
void SignedBsgs::for_level_gens(int level, const std::function<void(const SignedPerm&)>& fn) const {
  for (int j = level; j < static_cast<int>(levels_.size()); ++j)
    for (const auto& h : levels_[j].gens) fn(h);
}

void SignedBsgs::recompute_orbit(int level) {
  Level& lv = levels_[level];
  const int npts = slots_ + 2;
  lv.orbit.clear();
  lv.transversal.clear();
  lv.where.assign(npts, -1);
  const int b = base_point(level);
  lv.orbit.push_back(b);
  lv.where[b] = 0;
  lv.transversal.push_back(SignedPerm::identity(slots_));
  for (std::size_t i = 0; i < lv.orbit.size(); ++i) {
    const int p = lv.orbit[i];
    for_level_gens(level, [&](const SignedPerm& h) {
      const int q = h(p);
      if (lv.where[q] < 0) {
        lv.where[q] = static_cast<int>(lv.orbit.size());
        lv.orbit.push_back(q);
        lv.transversal.push_back(h * lv.transversal[i]);
      }
    });
  }
}

std::optional<std::pair<int, SignedPerm>> SignedBsgs::sift(SignedPerm g, int from) const {
  for (int j = from; j < base_length(); ++j) {
    const Level& lv = levels_[j];
    const int x = g(base_point(j));
    if (x == base_point(j)) continue;
    if (lv.where[x] < 0) return std::make_pair(j, g);
    g = lv.transversal[lv.where[x]].inverse() * g;
  }
  if (!g.is_identity())
    // Fixing every slot and the sign point leaves only the identity.
    throw std::logic_error("sift residual past full base");
  return std::nullopt;
}

bool SignedBsgs::complete_from(int level) {
  recompute_orbit(level);
  Level& lv = levels_[level];
  bool added = false;
  for (std::size_t i = 0; i < lv.orbit.size(); ++i) {
    for_level_gens(level, [&](const SignedPerm& h) {
      const int q = h(lv.orbit[i]);
      const SignedPerm schreier =
          lv.transversal[lv.where[q]].inverse() * (h * lv.transversal[i]);
      if (schreier.is_identity()) return;
      auto res = sift(schreier, level + 1);
      if (res) {
        levels_[res->first].gens.push_back(res->second);
        recompute_orbit(res->first);
        added = true;
      }
    });
  }
  return added;
}

Int SignedBsgs::order() const {
  Int n = 1;
  for (const auto& lv : levels_) n *= static_cast<unsigned long>(lv.orbit.size());
  return n;
}

bool SignedBsgs::contains(const SignedPerm& g) const {
  if (g.slots() != slots_) throw std::invalid_argument("slot count mismatch");
  return !sift(g, 0).has_value();
}

SignedBsgs::SignMembership SignedBsgs::signed_membership(const SignedPerm& g) const {
  SignedPerm plus = g;
  if (plus.sign() < 0) plus.flip_sign();
  SignedPerm minus = plus;
  minus.flip_sign();
  return SignMembership{contains(plus), contains(minus)};
}

bool SignedBsgs::minus_identity_member() const {
  // -identity fixes every slot, so it is a member exactly when the sign
  // level's basic orbit reaches the second sign point.
  return levels_[slots_].orbit.size() == 2;
}

}  // namespace rinv
