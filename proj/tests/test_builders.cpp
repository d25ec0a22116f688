#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "multmodel/builders.hpp"
#include "multmodel/errors.hpp"

using namespace multmodel;
using test::all_instances;
using test::demo_domains;
using test::demo_positive_elements;
using test::demo_tree;
using test::demo_values;

namespace {
const VarId A = 0, B = 1, C = 2, D = 3;
}

TEST_CASE("from_table places one element per instance") {
  const DomainTable doms = demo_domains();
  const auto values = demo_values();
  const auto table = from_table(doms, {A, B, C, D}, values);
  CHECK(table.kind() == ModelKind::table);
  REQUIRE(table.elements().size() == 16);
  const std::vector<VarId> scope{A, B, C, D};
  for (std::size_t i = 0; i < values.size(); ++i) {
    CHECK(table.evaluate(instance_at(doms, scope, i)) == values[i]);
  }

  SUBCASE("direct placement") {
    const DomainTable two({2, 2});
    const auto cpt =
        from_table(two, {A, B}, std::vector<double>{0.8, 0.2, 0.4, 0.6});
    const Element expected{Clause::assignment(two, {{A, 1}, {B, 1}}), 0.6};
    CHECK(std::count(cpt.elements().begin(), cpt.elements().end(),
                     expected) == 1);
  }

  SUBCASE("constant table prunes to nothing") {
    const DomainTable two({2, 2});
    const auto ones =
        from_table(two, {A, B}, std::vector<double>{1, 1, 1, 1});
    CHECK(ones.prune_units(0.0).elements().empty());
  }

  SUBCASE("value count must match the joint size") {
    CHECK_THROWS_AS(from_table(doms, {A, B}, std::vector<double>{1, 2, 3}),
                    FormatError);
  }
}

TEST_CASE("to_positive applies the alternating-product construction") {
  SUBCASE("two binary variables") {
    const DomainTable doms({2, 2});
    const std::vector<double> psi{0.8, 0.2, 0.4, 0.6};  // 00 01 10 11
    const auto positive = to_positive(doms, std::vector<VarId>{A, B}, psi,
                                      1e-9);
    const Clause both = Clause::assignment(doms, {{A, 1}, {B, 1}});
    double gamma = 0.0;
    for (const auto& element : positive.elements()) {
      if (element.clause == both) gamma = element.gamma;
    }
    CHECK(gamma ==
          doctest::Approx(psi[0] * psi[3] / (psi[1] * psi[2]))
              .epsilon(1e-12));
  }

  SUBCASE("demo table compresses to eight elements") {
    const DomainTable doms = demo_domains();
    const auto positive =
        to_positive(doms, std::vector<VarId>{A, B, C, D}, demo_values(),
                    1e-9);
    CHECK(positive.kind() == ModelKind::positive);
    const auto expected = demo_positive_elements(doms);
    REQUIRE(positive.elements().size() == expected.size());
    for (const auto& [clause, gamma] : expected) {
      bool found = false;
      for (const auto& element : positive.elements()) {
        if (element.clause == clause) {
          CHECK(element.gamma == doctest::Approx(gamma).epsilon(1e-12));
          found = true;
        }
      }
      CHECK(found);
    }
  }

  SUBCASE("independence leaves no interaction element") {
    const DomainTable doms({2, 2});
    // psi(a, b) = g(a) * h(b)
    const std::vector<double> g{0.3, 1.7}, h{0.9, 2.1};
    std::vector<double> psi;
    for (double ga : g) {
      for (double hb : h) psi.push_back(ga * hb);
    }
    const auto positive =
        to_positive(doms, std::vector<VarId>{A, B}, psi, 1e-9);
    for (const auto& element : positive.elements()) {
      CHECK(element.clause.arity() <= 1);
    }
  }

  SUBCASE("round trip within tolerance and positivity") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> value(0.05, 3.0);
    const DomainTable doms({2, 3, 2});
    const std::vector<VarId> scope{0, 1, 2};
    for (int rep = 0; rep < 10; ++rep) {
      std::vector<double> psi(doms.joint_size(scope));
      for (double& v : psi) v = value(rng);
      const auto positive = to_positive(doms, scope, psi, 1e-9);
      for (const auto& element : positive.elements()) {
        CHECK(element.gamma > 0);
        CHECK(std::isfinite(element.gamma));
      }
      const auto back = to_table(doms, positive);
      for (std::size_t i = 0; i < psi.size(); ++i) {
        CHECK(back[i] == doctest::Approx(psi[i]).epsilon(1e-9));
      }
    }
  }

  SUBCASE("rejects non-positive tables") {
    const DomainTable doms({2});
    CHECK_THROWS_AS(
        to_positive(doms, std::vector<VarId>{A}, std::vector<double>{1, 0},
                    0.0),
        NonPositiveTable);
  }
}

TEST_CASE("from_decision_graph keeps exactly the path elements") {
  const DomainTable doms = demo_domains();
  const auto tree = from_decision_graph(doms, demo_tree(doms));
  CHECK(tree.kind() == ModelKind::decision_graph);
  CHECK(tree.elements().size() == 6);
  // every instance hits exactly one path, so evaluation reads off the leaf
  const std::vector<VarId> scope{A, B, C, D};
  const auto values = demo_values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    CHECK(tree.evaluate(instance_at(doms, scope, i)) == values[i]);
  }

  SUBCASE("single trivial path") {
    const auto constant = from_decision_graph(
        doms, DecisionGraphSpec{{A}, {{Clause::top(), 0.3}}});
    CHECK(constant.elements().size() == 1);
  }

  SUBCASE("value-set edges over a ternary variable") {
    const DomainTable ternary({3});
    const auto split = from_decision_graph(
        ternary, DecisionGraphSpec{{0},
                                   {{Clause::of(ternary, {{0, {0, 1}}}), 2.0},
                                    {Clause::of(ternary, {{0, {2}}}), 3.0}}});
    CHECK(split.elements().size() == 2);
    CHECK(split.evaluate(Instance::over(ternary, {{0, 1}})) == 2.0);
    CHECK(split.evaluate(Instance::over(ternary, {{0, 2}})) == 3.0);
  }

  SUBCASE("overlaps and gaps are rejected") {
    CHECK_THROWS_AS(
        from_decision_graph(
            doms,
            DecisionGraphSpec{{A, B},
                              {{Clause::assignment(doms, {{A, 0}}), 1.0},
                               {Clause::assignment(doms, {{A, 0}, {B, 1}}),
                                2.0}}}),
        NotAPartition);
    CHECK_THROWS_AS(
        from_decision_graph(
            doms, DecisionGraphSpec{
                      {A}, {{Clause::assignment(doms, {{A, 0}}), 1.0}}}),
        NotAPartition);
  }
}

TEST_CASE("from_noisy_or reproduces the conditional table") {
  const DomainTable doms({2, 2, 2});  // C1, C2, E
  NoisyOrSpec spec;
  spec.child = 2;
  spec.parents = {0, 1};
  spec.leak = 1.0;
  spec.inhibitors = {0.2, 0.4};
  const auto factor = from_noisy_or(doms, spec);
  CHECK(factor.kind() == ModelKind::noisy_or);
  CHECK(factor.elements().size() == 4 + 2 + 1);

  CHECK(factor.evaluate(Instance::over(doms, {{2, 0}, {0, 1}, {1, 1}})) ==
        doctest::Approx(0.08).epsilon(1e-14));
  CHECK(factor.evaluate(Instance::over(doms, {{2, 1}, {0, 1}, {1, 0}})) ==
        doctest::Approx(0.8).epsilon(1e-14));

  SUBCASE("dense table rows") {
    const auto values = to_table(doms, factor);
    // sorted scope (C1, C2, E), E fastest
    CHECK(values[0] == doctest::Approx(1.0));    // C1=0 C2=0 E=0
    CHECK(values[2] == doctest::Approx(0.4));    // C1=0 C2=1 E=0
    CHECK(values[4] == doctest::Approx(0.2));    // C1=1 C2=0 E=0
    CHECK(values[6] == doctest::Approx(0.08));   // C1=1 C2=1 E=0
  }

  SUBCASE("full conditional sums to one per parent configuration") {
    NoisyOrSpec leaky = spec;
    leaky.leak = 0.9;
    const auto cpd = from_noisy_or(doms, leaky);
    for (int c1 = 0; c1 < 2; ++c1) {
      for (int c2 = 0; c2 < 2; ++c2) {
        double total = 0.0;
        for (int e = 0; e < 2; ++e) {
          total += cpd.evaluate(
              Instance::over(doms, {{0, c1}, {1, c2}, {2, e}}));
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
      }
    }
  }

  SUBCASE("parent cap") {
    NoisyOrSpec big;
    big.child = 2;
    big.parents = {0, 1};
    big.inhibitors = {0.5, 0.5};
    big.parent_cap = 1;
    CHECK_THROWS_AS(from_noisy_or(doms, big), TooManyParents);
  }

  SUBCASE("input validation") {
    NoisyOrSpec bad = spec;
    bad.inhibitors = {0.2};
    CHECK_THROWS_AS(from_noisy_or(doms, bad), FormatError);
    bad = spec;
    bad.leak = 0.0;
    CHECK_THROWS_AS(from_noisy_or(doms, bad), FormatError);
    const DomainTable ternary({3, 2, 2});
    CHECK_THROWS_AS(from_noisy_or(ternary, NoisyOrSpec{2, {0}, 1.0, {0.5}}),
                    FormatError);
  }
}

TEST_CASE("from_loglinear exponentiates the weights") {
  const DomainTable doms({2, 2, 2});

  SUBCASE("constant-only model") {
    const auto constant = from_loglinear(doms, LogLinearSpec{{A}, 0.0, {}});
    REQUIRE(constant.elements().size() == 1);
    CHECK(constant.elements()[0].clause.is_top());
    CHECK(constant.elements()[0].gamma == 1.0);
    CHECK(constant.prune_units(0.0).elements().empty());
  }

  SUBCASE("single term") {
    LogLinearSpec spec;
    spec.scope = {A};
    spec.terms = {{Instance::over(doms, {{A, 1}}), std::log(2.0)}};
    const auto m = from_loglinear(doms, spec);
    CHECK(m.kind() == ModelKind::log_linear);
    REQUIRE(m.elements().size() == 2);
    CHECK(m.evaluate(Instance::over(doms, {{A, 1}})) ==
          doctest::Approx(2.0).epsilon(1e-14));
  }

  SUBCASE("full three-variable model has a term per subset instantiation") {
    LogLinearSpec spec;
    spec.scope = {A, B, C};
    spec.mu = 0.1;
    for (int mask = 1; mask < 8; ++mask) {
      std::vector<VarId> vars;
      for (VarId v : {A, B, C}) {
        if (mask >> v & 1) vars.push_back(v);
      }
      const std::uint64_t combos = doms.joint_size(vars);
      for (std::uint64_t i = 0; i < combos; ++i) {
        spec.terms.push_back(
            LogLinearTerm{instance_at(doms, vars, i), 0.01 * mask + 0.001 * i});
      }
    }
    CHECK(spec.terms.size() == 26);
    const auto m = from_loglinear(doms, spec);
    CHECK(m.elements().size() == 27);
  }

  SUBCASE("duplicate literals are rejected") {
    LogLinearSpec spec;
    spec.scope = {A, B};
    spec.terms = {{Instance::over(doms, {{A, 1}}), 0.5},
                  {Instance::over(doms, {{A, 1}}), 0.7}};
    CHECK_THROWS_AS(from_loglinear(doms, spec), DuplicateTerm);
  }

  SUBCASE("dense table equals the exponentiated sum of matching weights") {
    LogLinearSpec spec;
    spec.scope = {A, B, C};
    spec.mu = -0.4;
    spec.terms = {{Instance::over(doms, {{A, 1}}), 0.3},
                  {Instance::over(doms, {{B, 1}, {C, 0}}), -0.8},
                  {Instance::over(doms, {{A, 0}, {C, 1}}), 0.45}};
    const auto m = from_loglinear(doms, spec);
    const auto table = to_table(doms, m);
    for (std::size_t i = 0; i < table.size(); ++i) {
      const Instance d = instance_at(doms, m.scope(), i);
      double log_value = spec.mu;
      for (const auto& term : spec.terms) {
        bool consistent = true;
        for (auto [var, val] : term.literals.items()) {
          if (*d.value(var) != val) consistent = false;
        }
        if (consistent) log_value += term.lambda;
      }
      CHECK(table[i] ==
            doctest::Approx(std::exp(log_value)).epsilon(1e-12));
    }
  }
}

TEST_CASE("to_table enumerates the scope") {
  const DomainTable doms = demo_domains();
  const auto values = demo_values();
  const auto table = from_table(doms, {A, B, C, D}, values);
  CHECK(to_table(doms, table) == values);
  CHECK_THROWS_AS(to_table(doms, table, /*cap=*/4), TooLarge);
}
