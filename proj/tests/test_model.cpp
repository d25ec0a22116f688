#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "multmodel/builders.hpp"
#include "multmodel/errors.hpp"
#include "multmodel/model.hpp"

using namespace multmodel;
using test::all_instances;
using test::demo_domains;
using test::demo_tree;
using test::demo_values;

namespace {
const VarId A = 0, B = 1, C = 2, D = 3;
}

TEST_CASE("evaluate multiplies the parameters of satisfied elements") {
  const DomainTable doms = demo_domains();
  const MultiplicativeModel m(
      doms, {A, B, C, D},
      {{Clause::top(), 0.4},
       {Clause::assignment(doms, {{A, 1}}), 0.25},
       {Clause::assignment(doms, {{B, 1}}), 2.0},
       {Clause::assignment(doms, {{A, 1}, {B, 1}}), 0.5}});
  const Instance d = Instance::over(doms, {{A, 1}, {B, 1}, {C, 0}, {D, 0}});
  CHECK(m.evaluate(d) == doctest::Approx(0.1).epsilon(1e-14));

  const MultiplicativeModel empty(doms, {A, B}, {});
  CHECK(empty.evaluate(Instance::over(doms, {{A, 0}, {B, 1}})) == 1.0);

  const auto tree = from_decision_graph(doms, demo_tree(doms));
  CHECK(tree.evaluate(Instance::over(doms,
                                     {{A, 1}, {C, 1}, {D, 0}, {B, 1}})) ==
        0.65);

  CHECK_THROWS_AS(m.evaluate(Instance::over(doms, {{A, 1}, {B, 1}})),
                  ScopeError);
}

TEST_CASE("model construction enforces the invariants") {
  const DomainTable doms({2, 2});
  CHECK_THROWS_AS(
      MultiplicativeModel(doms, {A}, {{Clause::bottom(), 1.0}}),
      FormatError);
  CHECK_THROWS_AS(
      MultiplicativeModel(doms, {A},
                          {{Clause::assignment(doms, {{A, 0}}), 1.0},
                           {Clause::assignment(doms, {{A, 0}}), 2.0}}),
      FormatError);
  CHECK_THROWS_AS(
      MultiplicativeModel(doms, {A},
                          {{Clause::assignment(doms, {{B, 0}}), 1.0}}),
      FormatError);
}

TEST_CASE("prune_units removes parameters close to one") {
  const DomainTable doms({2, 2});
  const MultiplicativeModel m(
      doms, {A, B},
      {{Clause::top(), 1.0},
       {Clause::assignment(doms, {{A, 1}}), 0.25},
       {Clause::assignment(doms, {{B, 1}}), 1.0 + 1e-12}});
  const auto pruned = m.prune_units(1e-9);
  REQUIRE(pruned.elements().size() == 1);
  CHECK(pruned.elements()[0].gamma == 0.25);

  CHECK(m.prune_units(0.0).elements().size() == 2);
  CHECK_THROWS_AS(m.prune_units(-1.0), InvalidValue);

  SUBCASE("pruning at zero changes no evaluation") {
    const auto zero_pruned = m.prune_units(0.0);
    for (const auto& d : all_instances(doms, m.scope())) {
      CHECK(zero_pruned.evaluate(d) == m.evaluate(d));
    }
  }

  SUBCASE("the demo positive structure prunes to eight elements") {
    const DomainTable doms4 = test::demo_domains();
    const auto raw = to_positive(doms4, std::vector<VarId>{0, 1, 2, 3},
                                 test::demo_values(), 0.0);
    CHECK(raw.prune_units(1e-9).elements().size() == 8);
  }

  SUBCASE("pruning perturbs evaluations by at most (1+tol)^removed") {
    const double tol = 0.05;
    const MultiplicativeModel near_units(
        doms, {A, B},
        {{Clause::top(), 1.04},
         {Clause::assignment(doms, {{A, 1}}), 0.97},
         {Clause::assignment(doms, {{B, 1}}), 3.0}});
    const auto pruned = near_units.prune_units(tol);
    const auto removed =
        near_units.elements().size() - pruned.elements().size();
    const double bound = std::pow(1.0 + tol, removed);
    for (const auto& d : all_instances(doms, near_units.scope())) {
      const double ratio = pruned.evaluate(d) / near_units.evaluate(d);
      CHECK(ratio <= bound + 1e-12);
      CHECK(ratio >= 1.0 / bound - 1e-12);
    }
  }
}

TEST_CASE("conditioning substitutes the evidence") {
  const DomainTable doms({2, 2});
  // P(B | A) with rows 0.8 0.2 0.4 0.6
  const auto cpt =
      from_table(doms, {A, B}, std::vector<double>{0.8, 0.2, 0.4, 0.6});

  SUBCASE("direct substitution") {
    const auto given_a1 = cpt.condition(Instance::over(doms, {{A, 1}}));
    REQUIRE(given_a1.elements().size() == 2);
    CHECK(given_a1.scope() == std::vector<VarId>{B});
    CHECK(given_a1.evaluate(Instance::over(doms, {{B, 0}})) == 0.4);
    CHECK(given_a1.evaluate(Instance::over(doms, {{B, 1}})) == 0.6);
  }

  SUBCASE("empty evidence is the identity") {
    CHECK(cpt.condition(Instance()) == cpt);
  }

  SUBCASE("evidence outside the scope is rejected") {
    const DomainTable wide({2, 2, 2});
    const auto narrow =
        from_table(wide, {A, B}, std::vector<double>{0.8, 0.2, 0.4, 0.6});
    CHECK_THROWS_AS(narrow.condition(Instance::over(wide, {{C, 0}})),
                    ScopeError);
  }

  SUBCASE("conditioned evaluation equals evaluation with substitution") {
    const DomainTable doms4 = demo_domains();
    const auto tree = from_decision_graph(doms4, demo_tree(doms4));
    for (VarId e : {A, B, C, D}) {
      for (Value val = 0; val < 2; ++val) {
        const Instance evidence = Instance::over(doms4, {{e, val}});
        const auto conditioned = tree.condition(evidence);
        for (const auto& u : all_instances(doms4, conditioned.scope())) {
          CHECK(conditioned.evaluate(u) ==
                doctest::Approx(tree.evaluate(u.merged_with(evidence)))
                    .epsilon(1e-14));
        }
      }
    }
  }
}

TEST_CASE("negative noisy-OR finding factorizes over the causes") {
  const DomainTable doms({2, 2, 2, 2, 2});
  NoisyOrSpec spec;
  spec.child = 4;
  spec.parents = {0, 1, 2, 3};
  spec.leak = 0.9;
  spec.inhibitors = {0.2, 0.3, 0.4, 0.5};
  const auto factor = from_noisy_or(doms, spec);
  const auto negative = factor.condition(Instance::over(doms, {{4, 0}}));
  // the leak element plus one per cause
  CHECK(negative.elements().size() == spec.parents.size() + 1);
  for (const auto& element : negative.elements()) {
    CHECK(element.clause.arity() <= 1);
  }
}

TEST_CASE("validate_partition recognizes exact covers") {
  const DomainTable doms = demo_domains();
  CHECK(validate_partition(doms, from_decision_graph(doms, demo_tree(doms))));

  const MultiplicativeModel overlapping(
      doms, {A, B},
      {{Clause::assignment(doms, {{A, 0}}), 1.0},
       {Clause::assignment(doms, {{A, 0}, {B, 1}}), 2.0}});
  CHECK(!validate_partition(doms, overlapping));

  const MultiplicativeModel uncovered(
      doms, {A}, {{Clause::assignment(doms, {{A, 0}}), 1.0}});
  CHECK(!validate_partition(doms, uncovered));

  SUBCASE("counting fallback agrees with enumeration") {
    const auto tree = from_decision_graph(doms, demo_tree(doms));
    CHECK(validate_partition(doms, tree, /*enumeration_cap=*/1));
    CHECK(!validate_partition(doms, overlapping, 1));
    CHECK(!validate_partition(doms, uncovered, 1));
  }
}

TEST_CASE("stats summarize structure size and naive evaluation cost") {
  const DomainTable doms = demo_domains();
  const auto table = from_table(doms, {A, B, C, D}, demo_values());
  const ModelStats table_stats = stats(doms, table);
  CHECK(table_stats.element_count == 16);
  CHECK(table_stats.max_arity == 4);
  CHECK(table_stats.scope_size == 4);
  CHECK(table_stats.naive_op_count == 16);  // one hit per instance

  const auto tree = from_decision_graph(doms, demo_tree(doms));
  CHECK(stats(doms, tree).element_count == 6);
  CHECK(stats(doms, tree).naive_op_count == 16);

  SUBCASE("naive count equals the enumerated satisfaction total") {
    const auto positive = to_positive(doms, table, 1e-9);
    const ModelStats s = stats(doms, positive);
    std::uint64_t total = 0;
    for (const auto& d : all_instances(doms, positive.scope())) {
      for (const auto& element : positive.elements()) {
        if (satisfies(d, element.clause)) ++total;
      }
    }
    CHECK(s.naive_op_count == total);
    CHECK(s.naive_op_count <=
          s.element_count * doms.joint_size(positive.scope()));
  }
}
