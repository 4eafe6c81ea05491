#include <doctest.h>

#include "rinv/oracle.hpp"
#include "rinv/relations.hpp"
#include "rinv/rulebase.hpp"

using namespace rinv;

namespace {

TableSet scans_for(std::initializer_list<const char*> names) {
  TableSet ts;
  for (const char* n : names)
    ts.add(std::make_shared<CaseScan>(CaseScan::enumerate(Case::parse(n))));
  return ts;
}

// Every single id of a relation lives in one order stratum, and product
// terms carry the same total order.
void check_homogeneous(const Relation& r) {
  int lambda = -1;
  for (const auto& [id, c] : r.comb.terms) {
    if (lambda < 0) lambda = id.cs.order();
    CHECK(id.cs.order() == lambda);
  }
  for (const auto& [key, c] : r.comb.products) {
    int sum = 0;
    for (const auto& id : key) sum += id.cs.order();
    if (lambda >= 0) CHECK(sum == lambda);
  }
}

}  // namespace

TEST_CASE("cyclic relations reduce the pair case to two invariants") {
  auto ts = scans_for({"0", "0,0"});
  const auto& table = ts.need(Case::parse("0,0")).table();
  RuleBase rb;
  int pivots = 0;
  for (std::int32_t i = 1; i <= table.invars(); ++i)
    for (const auto& r : step_relations(ts, InvariantId{Case::parse("0,0"), i}, Step::Cyclic, 4))
      if (rb.eliminate(r.comb, Step::Cyclic)) ++pivots;
  CHECK(pivots == 1);
  CHECK(table.invars() - pivots == 2);

  // The installed rule expresses one contraction through the other with the
  // halving coefficient.
  const auto& [pivot, rule] = *rb.rules().begin();
  REQUIRE(rule.rhs.terms.size() == 1);
  const auto& [lower, coeff] = *rule.rhs.terms.begin();
  CHECK((coeff == Rational(1, 2) || coeff == Rational(2)));
  CHECK(GlobalOrderLess{}(lower, pivot));
}

TEST_CASE("cyclic on the scalar case yields nothing") {
  auto ts = scans_for({"0"});
  RuleBase rb;
  for (const auto& r : step_relations(ts, InvariantId{Case::parse("0"), 1}, Step::Cyclic, 4))
    CHECK(!rb.eliminate(r.comb, Step::Cyclic));
}

TEST_CASE("bianchi needs derivatives") {
  auto ts = scans_for({"0", "0,0"});
  CHECK(bianchi_relations(ts, InvariantId{Case::parse("0,0"), 1}).empty());
}

TEST_CASE("bianchi halves the one-factor second-order case") {
  auto ts = scans_for({"2"});
  const Case c = Case::parse("2");
  RuleBase rb;
  int pivots = 0;
  for (std::int32_t i = 1; i <= 2; ++i)
    for (const auto& r : step_relations(ts, InvariantId{c, i}, Step::Bianchi, 4))
      if (rb.eliminate(r.comb, Step::Bianchi)) ++pivots;
  CHECK(pivots == 1);
  const auto& [pivot, rule] = *rb.rules().begin();
  REQUIRE(rule.rhs.terms.size() == 1);
  CHECK((rule.rhs.terms.begin()->second == Rational(1, 2) ||
         rule.rhs.terms.begin()->second == Rational(2)));
}

TEST_CASE("commutation corrections require the higher-degree case tables") {
  auto ts = scans_for({"2"});
  CHECK_THROWS_AS(commutation_relations(ts, InvariantId{Case::parse("2"), 1}),
                  DependencyError);
}

TEST_CASE("relation generators are deterministic") {
  auto ts = scans_for({"0", "0,0", "2"});
  const InvariantId id{Case::parse("2"), 1};
  for (Step s : {Step::Cyclic, Step::Bianchi, Step::Commute, Step::DimDep}) {
    const auto a = step_relations(ts, id, s, 4);
    const auto b = step_relations(ts, id, s, 4);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].comb == b[i].comb);
  }
}

TEST_CASE("every generated relation of the low-order cases evaluates to zero") {
  auto ts = scans_for({"0", "0,0", "2", "0,0,0", "0,2", "1,1", "4", "0*", "0,0*", "2*"});
  PolyContext ctx(6);
  std::vector<CurvatureJet> jets;
  for (std::uint64_t seed : {101ull, 20240819ull})
    jets.push_back(curvature_jet(PolyMetric::random(&ctx, seed, -1), 4));
  std::vector<JetEvaluator> evals;
  for (const auto& jet : jets) {
    JetEvaluator ev(&jet);
    for (const auto& [c, scan] : ts.scans()) ev.add_case(c, scan->table().entries);
    evals.push_back(std::move(ev));
  }
  for (const auto& [c, scan] : ts.scans()) {
    for (std::int32_t i = 1; i <= scan->table().invars(); ++i) {
      for (Step s : {Step::Cyclic, Step::Bianchi, Step::Commute, Step::DimDep}) {
        for (const auto& r : step_relations(ts, InvariantId{c, i}, s, 4)) {
          check_homogeneous(r);
          for (const auto& ev : evals) {
            const Rational v = ev.value(r.comb);
            CHECK_MESSAGE(v == 0, c.str(), " idx ", i, " step ", step_name(s));
          }
        }
      }
    }
  }
}

TEST_CASE("epsilon pair expansion produces a valid identity") {
  auto ts = scans_for({"0", "0,0", "0*", "0,0*", "0,0,0,0"});
  const Case dual = Case::parse("0,0*");
  const auto& table = ts.need(dual).table();
  PolyContext ctx(2);
  std::vector<CurvatureJet> jets;
  for (std::uint64_t seed : {7ull, 99ull})
    jets.push_back(curvature_jet(PolyMetric::random(&ctx, seed, -1), 0));
  for (std::int32_t i = 1; i <= table.invars(); ++i)
    for (std::int32_t j = i; j <= table.invars(); ++j) {
      const Relation r =
          dual_pair_relation(ts, InvariantId{dual, i}, InvariantId{dual, j}, -1);
      REQUIRE(r.comb.products.size() >= 1);
      CHECK(r.comb.products.begin()->second == 1);
      for (const auto& jet : jets) {
        JetEvaluator ev(&jet);
        for (const auto& [c, scan] : ts.scans()) ev.add_case(c, scan->table().entries);
        CHECK(ev.value(r.comb) == 0);
      }
    }
}

TEST_CASE("commutation on a contracted pair of derivatives cancels identically") {
  // [nabla_a, nabla_b] T^{ab} = R_ae T^ae - R_be T^be = 0: the one-factor
  // second-order case generates no surviving commutation relations.
  auto ts = scans_for({"0", "0,0", "2"});
  for (std::int32_t i = 1; i <= 2; ++i)
    CHECK(commutation_relations(ts, InvariantId{Case::parse("2"), i}).empty());
}

TEST_CASE("commutation mixes higher-degree cases into a derivative case") {
  auto ts = scans_for({"0", "0,0", "2", "0,0,0", "0,2", "1,1", "4"});
  bool mixes = false;
  const auto& table = ts.need(Case::parse("4")).table();
  for (std::int32_t i = 1; i <= table.invars(); ++i)
    for (const auto& r : commutation_relations(ts, InvariantId{Case::parse("4"), i}))
      for (const auto& [id, c] : r.comb.terms)
        if (id.cs.degree() == 2) mixes = true;
  CHECK(mixes);
}

TEST_CASE("dimension-dependent antisymmetrization drops small slots silently") {
  auto ts = scans_for({"0"});
  // Four slots cannot host a five-slot antisymmetrization.
  CHECK(dimdep_relations(ts, InvariantId{Case::parse("0"), 1}, 4).empty());
}
