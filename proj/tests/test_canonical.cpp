#include <doctest.h>

#include "rinv/canonical.hpp"
#include "rinv/pairing_order.hpp"
#include "support.hpp"

using namespace rinv;

namespace {

Pairing from_pairs(int n, std::initializer_list<std::pair<int, int>> pairs) {
  Pairing p(n, 0);
  for (auto [a, b] : pairs) {
    p[a] = static_cast<std::uint8_t>(b);
    p[b] = static_cast<std::uint8_t>(a);
  }
  return p;
}

Monomial eq1_monomial() {
  Case c = Case::parse("0,1,3");
  return Monomial{c, from_pairs(16, {{0, 15}, {1, 9}, {2, 5}, {3, 10}, {4, 8},
                                     {6, 14}, {7, 12}, {11, 13}})};
}

// The canonical form printed in the source material for the same invariant,
// which equals minus the monomial above.
Monomial eq3_monomial() {
  Case c = Case::parse("0,1,3");
  return Monomial{c, from_pairs(16, {{0, 4}, {1, 9}, {2, 10}, {3, 15}, {5, 8},
                                     {6, 11}, {7, 14}, {12, 13}})};
}

}  // namespace

TEST_CASE("exhaustive double-coset minimization agrees for every small case") {
  for (const char* name : {"0", "2", "0,0", "4", "0*"}) {
    const Case c = Case::parse(name);
    const int n = c.slot_count();
    REQUIRE(n <= 8);
    const auto gens = slot_symmetry_generators(c);
    const auto group = testsupport::closure(n, gens);
    const auto bsgs = SignedBsgs::build(n, gens);
    const std::uint64_t total = matching_count(n);
    for (std::uint64_t r = 0; r < total; ++r) {
      const Pairing p = pairing_unrank(n, r);
      const auto brute = testsupport::brute_canonical(p, group);
      const auto fast = canonicalize_pairing(p, bsgs);
      CHECK(fast.canonical == brute.canonical);
      CHECK(fast.sign == brute.sign);
    }
  }
}

TEST_CASE("antisymmetric self-trace vanishes") {
  const Case c = Case::parse("0");
  const auto g = SignedBsgs::build(4, slot_symmetry_generators(c));
  CHECK(canonicalize_pairing(from_pairs(4, {{0, 1}, {2, 3}}), g).sign == 0);
  CHECK(canonicalize_pairing(from_pairs(4, {{0, 2}, {1, 3}}), g).sign != 0);
}

TEST_CASE("two writings of one invariant collide") {
  // R_abcd R^acbd vs R_acbd R^abcd: exchange the factors and rename dummies.
  const Case c = Case::parse("0,0");
  const auto g = SignedBsgs::build(8, slot_symmetry_generators(c));
  const Pairing w1 = from_pairs(8, {{0, 4}, {1, 6}, {2, 5}, {3, 7}});
  const Pairing w2 = from_pairs(8, {{4, 0}, {5, 2}, {6, 1}, {7, 3}});
  const Pairing w3 = from_pairs(8, {{0, 4}, {2, 5}, {1, 6}, {3, 7}});
  auto c1 = canonicalize_pairing(w1, g);
  auto c2 = canonicalize_pairing(w2, g);
  auto c3 = canonicalize_pairing(w3, g);
  CHECK(c1.canonical == c2.canonical);
  CHECK(c1.sign == c2.sign);
  CHECK(c1.canonical == c3.canonical);
}

TEST_CASE("canonicalization is idempotent") {
  testsupport::Rng rng{4242};
  GroupCache groups;
  for (const char* name : {"0,1,1", "1,3", "0,0,2"}) {
    const Case c = Case::parse(name);
    const auto& g = groups.group(c);
    for (int trial = 0; trial < 25; ++trial) {
      const Pairing p = testsupport::random_pairing(c.slot_count(), rng);
      const auto once = canonicalize_pairing(p, g);
      if (once.sign == 0) continue;
      const auto twice = canonicalize_pairing(once.canonical, g);
      CHECK(twice.canonical == once.canonical);
      CHECK(twice.sign == 1);
    }
  }
}

TEST_CASE("the degree-3 example canonicalizes with a sign flip") {
  GroupCache groups;
  const auto& g = groups.group(Case::parse("0,1,3"));
  const auto c1 = canonicalize_pairing(eq1_monomial().pairing, g);
  const auto c3 = canonicalize_pairing(eq3_monomial().pairing, g);
  CHECK(c1.canonical == c3.canonical);
  CHECK(c1.sign != 0);
  // value(eq1) = -value(eq3 monomial), so the signs relating both writings
  // to the shared canonical form must differ.
  CHECK(c1.sign == -c3.sign);
}

TEST_CASE("canonicalize_combination merges and cancels") {
  GroupCache groups;
  const Case c = Case::parse("0,0");
  const Monomial m{c, from_pairs(8, {{0, 4}, {1, 6}, {2, 5}, {3, 7}})};
  const Monomial rewritten{c, from_pairs(8, {{4, 0}, {5, 2}, {6, 1}, {7, 3}})};
  auto out = canonicalize_combination({{Rational(1), m}, {Rational(-1), rewritten}}, groups);
  CHECK(out.empty());

  auto sum = canonicalize_combination({{Rational(1), m}, {Rational(2), rewritten}}, groups);
  REQUIRE(sum.size() == 1);
  CHECK(sum[0].first == 3);
}

TEST_CASE("random small combinations match the brute-force canonicalizer") {
  testsupport::Rng rng{31337};
  GroupCache groups;
  const Case c = Case::parse("0,0");
  const auto group = testsupport::closure(8, slot_symmetry_generators(c));
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::pair<Rational, Monomial>> terms;
    std::map<Pairing, Rational> expect;
    for (int i = 0; i < 5; ++i) {
      const Pairing p = testsupport::random_pairing(8, rng);
      const Rational q(rng.below(7) - 3);
      terms.emplace_back(q, Monomial{c, p});
      const auto b = testsupport::brute_canonical(p, group);
      if (b.sign == 0 || q == 0) continue;
      auto [it, fresh] = expect.emplace(b.canonical, q * b.sign);
      if (!fresh && (it->second += q * b.sign) == 0) expect.erase(it);
    }
    const auto got = canonicalize_combination(terms, groups);
    REQUIRE(got.size() == expect.size());
    for (const auto& [coeff, mono] : got) {
      REQUIRE(expect.count(mono.pairing) == 1);
      CHECK(expect.at(mono.pairing) == coeff);
    }
  }
}
