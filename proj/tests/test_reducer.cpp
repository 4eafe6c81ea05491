#include <doctest.h>

#include "rinv/rulebase.hpp"
#include "support.hpp"

using namespace rinv;

namespace {

InvariantId id_of(const char* cs, std::int32_t i) { return InvariantId{Case::parse(cs), i}; }

LinComb comb_of(std::initializer_list<std::pair<InvariantId, Rational>> terms) {
  LinComb c;
  for (const auto& [id, q] : terms) c.add(id, q);
  return c;
}

}  // namespace

TEST_CASE("global order: order, then degree descending, then lambdas, then index") {
  GlobalOrderLess less;
  CHECK(less(id_of("0", 1), id_of("0,0", 1)));      // order 2 < 4
  CHECK(less(id_of("0,0", 5), id_of("2", 1)));      // same order, higher degree first
  CHECK(less(id_of("0,2", 9), id_of("1,1", 1)));    // lambda lexicographic
  CHECK(less(id_of("1,1", 1), id_of("1,1", 2)));    // index
  CHECK(less(id_of("1,1", 2), id_of("1,1*", 1)));   // nondual before dual
  CHECK(!less(id_of("4", 1), id_of("0,2", 7)));     // degree 1 ranks above degree 2
}

TEST_CASE("elimination builds a triangular system with greatest-id pivots") {
  RuleBase rb;
  auto p1 = rb.eliminate(comb_of({{id_of("2", 2), Rational(2)}, {id_of("2", 1), Rational(1)}}),
                         Step::Bianchi);
  REQUIRE(p1);
  CHECK(*p1 == id_of("2", 2));
  CHECK(rb.find(id_of("2", 2))->rhs == comb_of({{id_of("2", 1), Rational(-1, 2)}}));

  // A dependent relation reduces away.
  CHECK(!rb.eliminate(comb_of({{id_of("2", 2), Rational(4)}, {id_of("2", 1), Rational(2)}}),
                      Step::Bianchi));

  // A relation reduced through the existing rule before pivoting: the
  // surviving {2} id outranks the degree-2 case and becomes the pivot.
  auto p2 = rb.eliminate(comb_of({{id_of("0,0", 3), Rational(1)},
                                  {id_of("2", 2), Rational(5)},
                                  {id_of("2", 1), Rational(3)}}),
                         Step::Commute);
  REQUIRE(p2);
  CHECK(*p2 == id_of("2", 1));
  CHECK(rb.find(id_of("2", 1))->rhs == comb_of({{id_of("0,0", 3), Rational(-2)}}));
}

TEST_CASE("rule application is exact and idempotent") {
  testsupport::Rng rng{2024};
  RuleBase rb;
  // Random triangular system over one case.
  for (int i = 20; i > 10; --i) {
    LinComb r;
    r.add(id_of("1,1", i), Rational(1 + rng.below(5)));
    for (int j = 1; j < 6; ++j) r.add(id_of("1,1", 1 + rng.below(10)), Rational(rng.below(9) - 4));
    rb.eliminate(r, Step::Cyclic);
  }
  for (int trial = 0; trial < 100; ++trial) {
    LinComb x;
    for (int j = 0; j < 8; ++j) x.add(id_of("1,1", 1 + rng.below(20)), Rational(rng.below(9) - 4));
    const LinComb once = rb.reduce(x);
    for (const auto& [id, c] : once.terms) CHECK(!rb.reducible(id));
    CHECK(rb.reduce(once) == once);
  }
}

TEST_CASE("rank agrees with dense elimination on random sparse systems") {
  testsupport::Rng rng{777};
  for (int trial = 0; trial < 25; ++trial) {
    const int unknowns = 5 + rng.below(16);
    const int rows = 3 + rng.below(25);
    std::vector<std::vector<Rational>> dense(rows, std::vector<Rational>(unknowns, Rational(0)));
    RuleBase rb;
    int pivots = 0;
    for (int r = 0; r < rows; ++r) {
      LinComb comb;
      for (int k = 0; k < 4; ++k) {
        const int col = rng.below(unknowns);
        const Rational q(rng.below(7) - 3);
        dense[r][col] += q;
        comb.add(id_of("1,1", col + 1), q);
      }
      if (rb.eliminate(comb, Step::Cyclic)) ++pivots;
    }
    CHECK(pivots == testsupport::dense_rank(dense));
  }
}

TEST_CASE("expanded and non-expanded modes agree after reduction") {
  testsupport::Rng rng{31};
  RuleBase expanded(StoreMode::Expanded), lazy(StoreMode::NonExpanded);
  std::vector<LinComb> rels;
  for (int i = 0; i < 30; ++i) {
    LinComb r;
    for (int k = 0; k < 5; ++k) r.add(id_of("0,2", 1 + rng.below(14)), Rational(rng.below(9) - 4));
    if (r.empty()) continue;
    rels.push_back(r);
  }
  for (const auto& r : rels) {
    expanded.eliminate(r, Step::DimDep);
    lazy.eliminate(r, Step::DimDep);
  }
  REQUIRE(expanded.rules().size() == lazy.rules().size());
  for (int trial = 0; trial < 50; ++trial) {
    LinComb x;
    for (int k = 0; k < 6; ++k) x.add(id_of("0,2", 1 + rng.below(14)), Rational(rng.below(9) - 4));
    int rounds_lazy = 0;
    const LinComb a = expanded.reduce(x);
    const LinComb b = lazy.reduce(x, &rounds_lazy);
    CHECK(a == b);
  }
  // Expanded right-hand sides stay pivot-free.
  for (const auto& [pivot, rule] : expanded.rules())
    for (const auto& [id, c] : rule.rhs.terms) CHECK(!expanded.reducible(id));
}

TEST_CASE("products reduce through their components") {
  RuleBase rb;
  rb.eliminate(comb_of({{id_of("0,0", 3), Rational(1)}, {id_of("0,0", 2), Rational(-2)}}),
               Step::Cyclic);
  LinComb x;
  x.add_product({id_of("0,0", 3), id_of("0", 1)}, Rational(1));
  const LinComb r = rb.reduce(x);
  CHECK(r.terms.empty());
  REQUIRE(r.products.size() == 1);
  const auto& [key, coeff] = *r.products.begin();
  CHECK(coeff == 2);
  CHECK(key == ProductKey{id_of("0", 1), id_of("0,0", 2)});

  // A vanishing component kills the whole product.
  rb.eliminate(comb_of({{id_of("2", 1), Rational(5)}}), Step::Cyclic);
  LinComb y;
  y.add_product({id_of("2", 1), id_of("0", 1)}, Rational(7));
  CHECK(rb.reduce(y).empty());
}

TEST_CASE("an empty relation set changes nothing") {
  RuleBase rb;
  CHECK(!rb.eliminate(LinComb{}, Step::Cyclic));
  CHECK(rb.rules().empty());
}
