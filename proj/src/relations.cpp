#include "rinv/relations.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace rinv {

const char* step_name(Step s) {
  switch (s) {
    case Step::Cyclic: return "cyclic";
    case Step::Bianchi: return "bianchi";
    case Step::Commute: return "commute";
    case Step::DimDep: return "dimdep";
    case Step::Dual: return "dual";
  }
  return "?";
}

Step step_from_name(const std::string& name) {
  for (Step s : {Step::Cyclic, Step::Bianchi, Step::Commute, Step::DimDep, Step::Dual})
    if (name == step_name(s)) return s;
  throw std::invalid_argument("unknown step '" + name + "'");
}

void TableSet::add(std::shared_ptr<const CaseScan> scan) {
  scans_[scan->the_case()] = std::move(scan);
}

const CaseScan* TableSet::find(const Case& c) const {
  auto it = scans_.find(c);
  return it == scans_.end() ? nullptr : it->second.get();
}

const CaseScan& TableSet::need(const Case& c) const {
  const CaseScan* s = find(c);
  if (!s) throw DependencyError(c);
  return *s;
}

void TableSet::accumulate(LinComb& out, const Rational& coeff, const Monomial& m) const {
  const CaseScan& scan = need(m.cs);
  const auto res = scan.resolve(m.pairing);
  if (res.kind == CaseScan::Kind::Zero) return;
  if (res.kind == CaseScan::Kind::Entry) {
    out.add(InvariantId{m.cs, res.index}, coeff * res.sign);
    return;
  }
  // Disconnected: a product of lower invariants. Split the canonical
  // representative; each component is connected, so it resolves to an entry
  // (or vanishes) in its own case.
  Rational c = coeff * res.sign;
  ProductKey key;
  for (const Monomial& part : split_components(Monomial{m.cs, scan.rep_pairing(res.rep_rank)})) {
    const CaseScan& sub = need(part.cs);
    const auto r = sub.resolve(part.pairing);
    if (r.kind == CaseScan::Kind::Zero) return;
    if (r.kind != CaseScan::Kind::Entry)
      throw std::logic_error("component of a product did not resolve to an entry");
    key.push_back(InvariantId{part.cs, r.index});
    c *= r.sign;
  }
  out.add_product(std::move(key), c);
}

namespace {

int permutation_parity(const std::vector<int>& perm) {
  int sign = 1;
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) sign = -sign;
  return sign;
}

// Sum over all arrangements of the chosen slots' contents, with parity signs:
// the full antisymmetrization of the monomial over those slots.
void antisymmetrize(const TableSet& ts, const Monomial& m, const std::vector<int>& slots,
                    LinComb& out) {
  const int k = static_cast<int>(slots.size());
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> img(m.cs.slot_count());
  do {
    std::iota(img.begin(), img.end(), 0);
    for (int i = 0; i < k; ++i) img[slots[i]] = slots[perm[i]];
    const SignedPerm g = SignedPerm::from_images(img, 1);
    ts.accumulate(out, Rational(permutation_parity(perm)),
                  Monomial{m.cs, conjugate(m.pairing, g)});
  } while (std::next_permutation(perm.begin(), perm.end()));
}

Monomial entry_monomial(const TableSet& ts, const InvariantId& id) {
  const CaseScan& scan = ts.need(id.cs);
  if (id.index < 1 || id.index > scan.table().invars())
    throw std::invalid_argument("unknown invariant " + id.str());
  return Monomial{id.cs, scan.table().entries[id.index - 1]};
}

void push_if_nonempty(std::vector<Relation>& out, Step step, LinComb&& comb) {
  if (!comb.empty()) out.push_back(Relation{step, std::move(comb)});
}

// Correction term of one derivative commutation: the derivative pair
// (positions k, k+1 on factor f) becomes a new curvature factor contracted
// into index position j of the inner tensor, and the outer derivatives are
// distributed per dist_mask (set bit = onto the new factor).
Monomial commute_correction(const Monomial& m, int f, int k, int j, unsigned dist_mask) {
  const Case& c = m.cs;
  const auto spans = factor_spans(c);
  const FactorSpan& sp = spans[f];
  const int lam = sp.lambda;
  const int dk = sp.deriv(k), dk1 = sp.deriv(k + 1);
  const int bj = j < 4 ? sp.riemann(j) : sp.deriv(j - 4);
  const int outer_count = lam - k - 2;

  int to_old = 0, to_new = 0;
  for (int i = 0; i < outer_count; ++i) (dist_mask >> i & 1u ? to_new : to_old)++;

  // Unsorted factor list: existing factors (f with its new order), then the
  // fresh curvature factor; stable sort into nondecreasing order.
  struct Src {
    int lambda;
    int tag;  // factor index, or -1 for the fresh factor
  };
  std::vector<Src> srcs;
  for (int g = 0; g < c.degree(); ++g)
    srcs.push_back(Src{g == f ? k + to_old : static_cast<int>(c.lambdas[g]), g});
  srcs.push_back(Src{to_new, -1});
  std::stable_sort(srcs.begin(), srcs.end(),
                   [](const Src& a, const Src& b) { return a.lambda < b.lambda; });

  Case nc;
  nc.dual = c.dual;
  for (const auto& s : srcs) nc.lambdas.push_back(static_cast<std::uint8_t>(s.lambda));

  // Old slot -> new slot for every retained slot; the fresh factor's slots.
  std::vector<int> map_old(c.slot_count(), -1);
  int nr[4] = {0, 0, 0, 0};
  int at = 0;
  for (const auto& s : srcs) {
    if (s.tag == -1) {
      for (int i = 0; i < 4; ++i) nr[i] = at + i;
      at += 4;
      int d = 0;
      for (int i = 0; i < outer_count; ++i)
        if (dist_mask >> i & 1u) map_old[sp.deriv(k + 2 + i)] = at + d++;
      at += to_new;
    } else if (s.tag == f) {
      for (int i = 0; i < 4; ++i) map_old[sp.riemann(i)] = at + i;
      at += 4;
      int d = 0;
      for (int i = 0; i < k; ++i) map_old[sp.deriv(i)] = at + d++;
      for (int i = 0; i < outer_count; ++i)
        if (!(dist_mask >> i & 1u)) map_old[sp.deriv(k + 2 + i)] = at + d++;
      at += k + to_old;
    } else {
      const FactorSpan& gs = spans[s.tag];
      for (int i = 0; i < gs.size(); ++i) map_old[gs.begin + i] = at + i;
      at += gs.size();
    }
  }
  if (c.dual)
    for (int i = 0; i < 4; ++i) map_old[eps_begin(c) + i] = at + i;

  // Index relocation: the pair's indices move onto the fresh factor's first
  // two slots, the replaced index onto its third; everything else follows
  // the slot map. The fourth fresh slot contracts with the freed position.
  auto loc = [&](int s) {
    if (s == dk) return nr[0];
    if (s == dk1) return nr[1];
    if (s == bj) return nr[2];
    return map_old[s];
  };
  Monomial out;
  out.cs = nc;
  out.pairing.assign(nc.slot_count(), 0);
  auto link = [&](int x, int y) {
    out.pairing[x] = static_cast<std::uint8_t>(y);
    out.pairing[y] = static_cast<std::uint8_t>(x);
  };
  for (int s = 0; s < c.slot_count(); ++s)
    if (m.pairing[s] > s) link(loc(s), loc(m.pairing[s]));
  link(nr[3], map_old[bj]);
  return out;
}

}  // namespace

std::vector<Relation> cyclic_relations(const TableSet& ts, const InvariantId& id) {
  const Monomial m = entry_monomial(ts, id);
  std::vector<Relation> out;
  for (const auto& sp : factor_spans(m.cs)) {
    for (int skip = 3; skip >= 0; --skip) {
      std::vector<int> slots;
      for (int i = 0; i < 4; ++i)
        if (i != skip) slots.push_back(sp.riemann(i));
      LinComb comb;
      antisymmetrize(ts, m, slots, comb);
      push_if_nonempty(out, Step::Cyclic, std::move(comb));
    }
  }
  return out;
}

std::vector<Relation> bianchi_relations(const TableSet& ts, const InvariantId& id) {
  const Monomial m = entry_monomial(ts, id);
  std::vector<Relation> out;
  for (const auto& sp : factor_spans(m.cs)) {
    if (sp.lambda == 0) continue;
    const int d0 = sp.deriv(0);
    for (int half = 0; half < 2; ++half) {
      std::vector<int> slots{sp.riemann(2 * half), sp.riemann(2 * half + 1), d0};
      LinComb comb;
      antisymmetrize(ts, m, slots, comb);
      push_if_nonempty(out, Step::Bianchi, std::move(comb));
    }
  }
  return out;
}

std::vector<Relation> commutation_relations(const TableSet& ts, const InvariantId& id) {
  const Monomial m = entry_monomial(ts, id);
  const auto spans = factor_spans(m.cs);
  std::vector<Relation> out;
  for (int f = 0; f < m.cs.degree(); ++f) {
    const int lam = spans[f].lambda;
    for (int k = 0; k + 1 < lam; ++k) {
      LinComb comb;
      ts.accumulate(comb, Rational(1), m);
      const SignedPerm swap = SignedPerm::from_cycles(
          m.cs.slot_count(), {{spans[f].deriv(k), spans[f].deriv(k + 1)}}, 1);
      ts.accumulate(comb, Rational(-1), Monomial{m.cs, conjugate(m.pairing, swap)});
      const int inner_rank = 4 + k;
      const unsigned dists = 1u << (lam - k - 2);
      for (int j = 0; j < inner_rank; ++j)
        for (unsigned mask = 0; mask < dists; ++mask)
          ts.accumulate(comb, Rational(1), commute_correction(m, f, k, j, mask));
      push_if_nonempty(out, Step::Commute, std::move(comb));
    }
  }
  return out;
}

std::vector<Relation> dimdep_relations(const TableSet& ts, const InvariantId& id,
                                       int dimension) {
  const Monomial m = entry_monomial(ts, id);
  const int n = m.cs.slot_count();
  const int k = dimension + 1;
  std::vector<Relation> out;
  if (n < k) return out;
  std::vector<int> subset(k);
  std::iota(subset.begin(), subset.end(), 0);
  for (;;) {
    LinComb comb;
    antisymmetrize(ts, m, subset, comb);
    push_if_nonempty(out, Step::DimDep, std::move(comb));
    int i = k - 1;
    while (i >= 0 && subset[i] == n - k + i) --i;
    if (i < 0) break;
    ++subset[i];
    for (int j = i + 1; j < k; ++j) subset[j] = subset[j - 1] + 1;
  }
  return out;
}

Relation dual_pair_relation(const TableSet& ts, const InvariantId& a, const InvariantId& b,
                            int signature_sign) {
  const Monomial ma = entry_monomial(ts, a);
  const Monomial mb = entry_monomial(ts, b);
  if (!ma.cs.dual || !mb.cs.dual)
    throw std::invalid_argument("dual pair expansion needs two dual invariants");

  struct Src {
    int lambda, side, idx;
  };
  std::vector<Src> srcs;
  for (int i = 0; i < ma.cs.degree(); ++i) srcs.push_back({ma.cs.lambdas[i], 0, i});
  for (int i = 0; i < mb.cs.degree(); ++i) srcs.push_back({mb.cs.lambdas[i], 1, i});
  std::stable_sort(srcs.begin(), srcs.end(),
                   [](const Src& x, const Src& y) { return x.lambda < y.lambda; });
  Case merged;
  for (const auto& s : srcs) merged.lambdas.push_back(static_cast<std::uint8_t>(s.lambda));

  const auto spa = factor_spans(ma.cs), spb = factor_spans(mb.cs);
  std::vector<int> map_a(ma.cs.slot_count(), -1), map_b(mb.cs.slot_count(), -1);
  int at = 0;
  for (const auto& s : srcs) {
    const auto& sp = (s.side == 0 ? spa : spb)[s.idx];
    auto& map = s.side == 0 ? map_a : map_b;
    for (int i = 0; i < sp.size(); ++i) map[sp.begin + i] = at + i;
    at += sp.size();
  }

  Relation rel{Step::Dual, {}};
  rel.comb.add_product(ProductKey{a, b}, Rational(1));

  const int ea = eps_begin(ma.cs), eb = eps_begin(mb.cs);
  std::vector<int> sigma{0, 1, 2, 3};
  do {
    Monomial t;
    t.cs = merged;
    t.pairing.assign(merged.slot_count(), 0);
    auto link = [&](int x, int y) {
      t.pairing[x] = static_cast<std::uint8_t>(y);
      t.pairing[y] = static_cast<std::uint8_t>(x);
    };
    for (int s = 0; s < ma.cs.slot_count(); ++s)
      if (ma.pairing[s] > s && map_a[s] >= 0 && map_a[ma.pairing[s]] >= 0)
        link(map_a[s], map_a[ma.pairing[s]]);
    for (int s = 0; s < mb.cs.slot_count(); ++s)
      if (mb.pairing[s] > s && map_b[s] >= 0 && map_b[mb.pairing[s]] >= 0)
        link(map_b[s], map_b[mb.pairing[s]]);
    for (int i = 0; i < 4; ++i)
      link(map_a[ma.pairing[ea + i]], map_b[mb.pairing[eb + sigma[i]]]);
    ts.accumulate(rel.comb, Rational(-signature_sign * permutation_parity(sigma)), t);
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return rel;
}

std::vector<Relation> step_relations(const TableSet& ts, const InvariantId& id, Step step,
                                     int dimension) {
  std::vector<Relation> raw;
  switch (step) {
    case Step::Cyclic: raw = cyclic_relations(ts, id); break;
    case Step::Bianchi: raw = bianchi_relations(ts, id); break;
    case Step::Commute: raw = commutation_relations(ts, id); break;
    case Step::DimDep: raw = dimdep_relations(ts, id, dimension); break;
    case Step::Dual: throw std::invalid_argument("dual relations are generated per pair");
  }
  // Deduplicate up to overall scale, keeping first occurrences in order.
  std::vector<Relation> out;
  std::set<std::string> seen;
  for (auto& r : raw) {
    LinComb norm = r.comb;
    const Rational lead = !norm.terms.empty() ? norm.terms.rbegin()->second
                                              : norm.products.rbegin()->second;
    norm.scale(1 / lead);
    std::string key;
    for (const auto& [tid, c] : norm.terms)
      key += tid.str() + "=" + to_string(c) + ";";
    for (const auto& [pk, c] : norm.products) {
      for (const auto& tid : pk) key += tid.str() + "*";
      key += "=" + to_string(c) + ";";
    }
    if (seen.insert(std::move(key)).second) out.push_back(std::move(r));
  }
  return out;
}

}  // namespace rinv
