#include "rinv/case_table.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rinv {

SortKey sort_key(const Case& c, const Pairing& p) {
  SortKey k;
  for (const auto& f : factor_spans(c)) {
    int internal = 0;
    for (int i = 0; i < 4; ++i) {
      const int partner = p[f.riemann(i)];
      if (partner >= f.riemann(0) && partner <= f.riemann(3)) ++internal;
    }
    if (internal == 4) ++k.ricci_scalars;
    else if (internal == 2) ++k.ricci_tensors;
    for (int d = 0; d + 1 < f.lambda; ++d)
      if (p[f.deriv(d)] == f.deriv(d + 1)) ++k.laplacians;
  }
  return k;
}

bool entry_order_less(const Case& c, const Pairing& a, const Pairing& b) {
  const SortKey ka = sort_key(c, a), kb = sort_key(c, b);
  if (ka.ricci_scalars != kb.ricci_scalars) return ka.ricci_scalars > kb.ricci_scalars;
  if (ka.ricci_tensors != kb.ricci_tensors) return ka.ricci_tensors > kb.ricci_tensors;
  if (ka.laplacians != kb.laplacians) return ka.laplacians > kb.laplacians;
  return pairing_canonical_less(a, b);
}

std::int32_t CaseTable::index_of(const Pairing& p) const {
  if (index_.empty() && !entries.empty()) {
    for (std::size_t i = 0; i < entries.size(); ++i)
      index_.emplace(std::string(entries[i].begin(), entries[i].end()),
                     static_cast<std::int32_t>(i + 1));
  }
  auto it = index_.find(std::string(p.begin(), p.end()));
  return it == index_.end() ? 0 : it->second;
}

void CaseTable::write(std::ostream& os) const {
  os << "invtable 1\n";
  os << "case " << cs.str() << "\n";
  os << "slots " << cs.slot_count() << "\n";
  os << "canon " << canon << "\n";
  os << "invars " << entries.size() << "\n";
  for (std::size_t i = 0; i < entries.size(); ++i) {
    os << (i + 1) << " +";
    const Pairing& p = entries[i];
    for (std::size_t s = 0; s < p.size(); ++s)
      if (p[s] > s) os << ' ' << s << '-' << static_cast<int>(p[s]);
    os << "\n";
  }
}

CaseTable CaseTable::read(std::istream& is) {
  CaseTable t;
  std::string word;
  int fmt = 0;
  is >> word >> fmt;
  if (word != "invtable" || fmt != 1) throw std::runtime_error("bad table header");
  std::string cs;
  int slots = 0;
  std::uint64_t invars = 0;
  is >> word >> cs >> word >> slots >> word >> t.canon >> word >> invars;
  t.cs = Case::parse(cs);
  if (t.cs.slot_count() != slots) throw std::runtime_error("table slot mismatch");
  for (std::uint64_t i = 0; i < invars; ++i) {
    std::uint64_t idx;
    std::string sign;
    is >> idx >> sign;
    if (!is || idx != i + 1) throw std::runtime_error("bad table entry index");
    Pairing p(slots, 0);
    for (int k = 0; k < slots / 2; ++k) {
      std::string pair;
      is >> pair;
      const auto dash = pair.find('-');
      if (dash == std::string::npos) throw std::runtime_error("bad slot pair");
      const int a = std::stoi(pair.substr(0, dash));
      const int b = std::stoi(pair.substr(dash + 1));
      p[a] = static_cast<std::uint8_t>(b);
      p[b] = static_cast<std::uint8_t>(a);
    }
    if (!pairing_well_formed(p)) throw std::runtime_error("bad table pairing");
    t.entries.push_back(std::move(p));
  }
  return t;
}

CaseScan CaseScan::enumerate(const Case& c, int max_slots) {
  if (!c.well_formed()) throw std::invalid_argument("malformed case " + c.str());
  const int n = c.slot_count();
  if (n % 2) throw std::invalid_argument("odd slot count in case " + c.str());
  if (n > max_slots)
    throw ResourceLimitError("case " + c.str() + " needs " + std::to_string(n) +
                             " slots, over the enumeration bound " + std::to_string(max_slots));

  CaseScan scan;
  scan.cs_ = c;
  scan.table_.cs = c;
  const std::uint64_t total = matching_count(n);
  scan.orbit_of_.assign(total, -1);
  scan.sign_seed_.assign(total, 0);

  const auto gens = slot_symmetry_generators(c);

  std::vector<std::uint64_t> queue;
  for (std::uint64_t seed = 0; seed < total; ++seed) {
    if (scan.orbit_of_[seed] >= 0) continue;
    const std::int32_t oid = static_cast<std::int32_t>(scan.orbits_.size());
    Orbit orb;
    orb.rep_rank = seed;
    Pairing rep = pairing_unrank(n, seed);
    std::int8_t rep_sign = 1;
    bool zero = false;

    queue.clear();
    queue.push_back(seed);
    scan.orbit_of_[seed] = oid;
    scan.sign_seed_[seed] = 1;
    for (std::size_t at = 0; at < queue.size(); ++at) {
      const std::uint64_t r = queue[at];
      const Pairing p = pairing_unrank(n, r);
      const std::int8_t sp = scan.sign_seed_[r];
      for (const auto& g : gens) {
        const Pairing q = conjugate(p, g);
        const std::uint64_t rq = pairing_rank(q);
        const std::int8_t sq = static_cast<std::int8_t>(sp * g.sign());
        if (scan.orbit_of_[rq] < 0) {
          scan.orbit_of_[rq] = oid;
          scan.sign_seed_[rq] = sq;
          queue.push_back(rq);
          if (pairing_canonical_less(q, rep)) {
            rep = q;
            orb.rep_rank = rq;
            rep_sign = sq;
          }
        } else if (scan.sign_seed_[rq] != sq) {
          zero = true;
        }
      }
    }

    orb.rep_sign = rep_sign;
    if (zero) {
      orb.entry = 0;
    } else {
      ++scan.table_.canon;
      orb.entry = is_product(Monomial{c, rep}) ? -1 : 1;  // entry index assigned below
    }
    scan.orbits_.push_back(orb);
  }

  // Collect, sort and index the non-product representatives.
  std::vector<std::int32_t> entry_orbits;
  for (std::size_t i = 0; i < scan.orbits_.size(); ++i)
    if (scan.orbits_[i].entry == 1) entry_orbits.push_back(static_cast<std::int32_t>(i));
  std::vector<Pairing> reps(entry_orbits.size());
  for (std::size_t i = 0; i < entry_orbits.size(); ++i)
    reps[i] = pairing_unrank(n, scan.orbits_[entry_orbits[i]].rep_rank);
  std::vector<std::size_t> order(entry_orbits.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return entry_order_less(c, reps[a], reps[b]);
  });
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    scan.orbits_[entry_orbits[order[pos]]].entry = static_cast<std::int32_t>(pos + 1);
    scan.table_.entries.push_back(reps[order[pos]]);
  }
  return scan;
}

CaseScan::Resolution CaseScan::resolve(const Pairing& p) const {
  const std::uint64_t r = pairing_rank(p);
  const std::int32_t oid = orbit_of_[r];
  const Orbit& orb = orbits_[oid];
  Resolution res;
  res.rep_rank = orb.rep_rank;
  if (orb.entry == 0) return res;  // Zero
  res.kind = orb.entry > 0 ? Kind::Entry : Kind::Product;
  res.index = orb.entry > 0 ? orb.entry : 0;
  res.sign = sign_seed_[r] * orb.rep_sign;
  return res;
}

Pairing CaseScan::rep_pairing(std::uint64_t rep_rank) const {
  return pairing_unrank(cs_.slot_count(), rep_rank);
}

}  // namespace rinv
