#pragma once

#include <vector>

#include "multmodel/builders.hpp"
#include "multmodel/clause.hpp"
#include "multmodel/types.hpp"

namespace multmodel::test {

// Worked 4-variable binary example used across the suites: a full table
// whose repetitions compress to a 6-path decision tree and to an 8-element
// positive structure.
inline DomainTable demo_domains() { return DomainTable({2, 2, 2, 2}); }

inline std::vector<double> demo_values() {
  return {0.4, 0.4, 0.4,   0.4,  0.8, 0.8, 0.8,  0.8,
          0.1, 0.1, 0.032, 0.08, 0.1, 0.1, 0.65, 0.08};
}

inline DecisionGraphSpec demo_tree(const DomainTable& doms) {
  const VarId A = 0, B = 1, C = 2, D = 3;
  DecisionGraphSpec spec;
  spec.scope = {A, B, C, D};
  spec.paths = {
      {Clause::assignment(doms, {{A, 0}, {B, 0}}), 0.4},
      {Clause::assignment(doms, {{A, 0}, {B, 1}}), 0.8},
      {Clause::assignment(doms, {{A, 1}, {C, 0}}), 0.1},
      {Clause::assignment(doms, {{A, 1}, {C, 1}, {D, 1}}), 0.08},
      {Clause::assignment(doms, {{A, 1}, {C, 1}, {D, 0}, {B, 0}}), 0.032},
      {Clause::assignment(doms, {{A, 1}, {C, 1}, {D, 0}, {B, 1}}), 0.65},
  };
  return spec;
}

// Expected positive-structure parameters of the demo table, derived from
// the alternating-product construction by hand.
inline std::vector<std::pair<Clause, double>> demo_positive_elements(
    const DomainTable& doms) {
  const VarId A = 0, B = 1, C = 2, D = 3;
  return {
      {Clause::top(), 0.4},
      {Clause::assignment(doms, {{A, 1}}), 0.25},
      {Clause::assignment(doms, {{B, 1}}), 2.0},
      {Clause::assignment(doms, {{A, 1}, {B, 1}}), 0.5},
      {Clause::assignment(doms, {{A, 1}, {C, 1}}), 0.32},
      {Clause::assignment(doms, {{A, 1}, {B, 1}, {C, 1}}), 20.3125},
      {Clause::assignment(doms, {{A, 1}, {C, 1}, {D, 1}}), 2.5},
      {Clause::assignment(doms, {{A, 1}, {B, 1}, {C, 1}, {D, 1}}),
       0.032 / 0.65},
  };
}

inline std::vector<VarId> all_vars(const DomainTable& doms) {
  std::vector<VarId> vars;
  for (std::size_t v = 0; v < doms.num_vars(); ++v) {
    vars.push_back(static_cast<VarId>(v));
  }
  return vars;
}

inline std::vector<Instance> all_instances(const DomainTable& doms,
                                           std::span<const VarId> scope) {
  std::vector<Instance> out;
  const std::uint64_t joint = doms.joint_size(scope);
  out.reserve(joint);
  for (std::uint64_t i = 0; i < joint; ++i) {
    out.push_back(instance_at(doms, scope, i));
  }
  return out;
}

/// Every canonical clause over the full roster, bottom included.
inline std::vector<Clause> all_clauses(const DomainTable& doms) {
  // per-variable choices: unconstrained, or any proper nonempty value subset
  std::vector<std::vector<std::vector<Value>>> choices;
  for (VarId v : all_vars(doms)) {
    std::vector<std::vector<Value>> sets;
    sets.push_back({});  // unconstrained marker
    const int card = doms.card(v);
    for (int mask = 1; mask < (1 << card) - 1; ++mask) {
      std::vector<Value> values;
      for (int val = 0; val < card; ++val) {
        if (mask >> val & 1) values.push_back(val);
      }
      sets.push_back(values);
    }
    choices.push_back(std::move(sets));
  }
  std::vector<Clause> out;
  std::vector<std::size_t> pick(choices.size(), 0);
  while (true) {
    std::vector<std::pair<VarId, std::vector<Value>>> raw;
    for (std::size_t v = 0; v < choices.size(); ++v) {
      if (pick[v] > 0) {
        raw.emplace_back(static_cast<VarId>(v), choices[v][pick[v]]);
      }
    }
    out.push_back(Clause::canonicalize(doms, raw));
    std::size_t pos = choices.size();
    while (pos > 0 && pick[pos - 1] + 1 == choices[pos - 1].size()) {
      pick[--pos] = 0;
    }
    if (pos == 0) break;
    ++pick[pos - 1];
  }
  out.push_back(Clause::bottom());
  return out;
}

}  // namespace multmodel::test
