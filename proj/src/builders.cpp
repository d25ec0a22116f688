#include "multmodel/builders.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <set>

#include "multmodel/errors.hpp"

namespace multmodel {

MultiplicativeModel from_table(const DomainTable& doms,
                               std::vector<VarId> scope,
                               std::span<const double> values) {
  const std::uint64_t joint = doms.joint_size(scope);
  if (values.size() != joint) {
    throw FormatError("table has " + std::to_string(values.size()) +
                      " values, expected " + std::to_string(joint));
  }
  std::vector<Element> elements;
  elements.reserve(values.size());
  for (std::uint64_t i = 0; i < joint; ++i) {
    if (!std::isfinite(values[i])) {
      throw FormatError("non-finite table value");
    }
    const Instance d = instance_at(doms, scope, i);
    elements.push_back(Element{map_instance(doms, d), values[i]});
  }
  return MultiplicativeModel(doms, std::move(scope), std::move(elements),
                             ModelKind::table);
}

MultiplicativeModel to_positive(const DomainTable& doms,
                                std::span<const VarId> scope,
                                std::span<const double> values, double tol) {
  const std::uint64_t joint = doms.joint_size(scope);
  if (values.size() != joint) {
    throw FormatError("table has " + std::to_string(values.size()) +
                      " values, expected " + std::to_string(joint));
  }
  for (double v : values) {
    if (!(v > 0) || !std::isfinite(v)) {
      throw NonPositiveTable("positive construction needs values > 0");
    }
  }
  // Work estimate: every assignment of non-zero values to a variable subset
  // costs one alternating subset sum.
  std::uint64_t work = 1;
  for (VarId v : scope) {
    const auto c = static_cast<std::uint64_t>(2 * doms.card(v) - 1);
    if (work > (std::uint64_t{1} << 27) / c) {
      throw TooLarge("positive construction too large");
    }
    work *= c;
  }

  const std::size_t n = scope.size();
  std::vector<double> log_values(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    log_values[i] = std::log(values[i]);
  }

  std::vector<Element> elements;
  // Mixed-radix walk over extended digits: 0 leaves the variable out, a
  // value >= 1 puts var=value into the assignment.
  std::vector<int> digits(n, 0);
  while (true) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i) {
      if (digits[i] > 0) members.push_back(i);
    }
    double log_gamma = 0.0;
    const std::size_t k = members.size();
    for (std::uint64_t subset = 0; subset < (std::uint64_t{1} << k);
         ++subset) {
      std::uint64_t index = 0;
      for (std::size_t i = 0; i < n; ++i) {
        index *= static_cast<std::uint64_t>(doms.card(scope[i]));
        // variables outside the subset stay at the reference value 0
        std::size_t pos =
            std::lower_bound(members.begin(), members.end(), i) -
            members.begin();
        if (pos < k && members[pos] == i && (subset >> pos & 1)) {
          index += static_cast<std::uint64_t>(digits[i]);
        }
      }
      const bool negate = ((k - std::popcount(subset)) & 1) != 0;
      log_gamma += negate ? -log_values[index] : log_values[index];
    }
    std::vector<std::pair<VarId, std::vector<Value>>> raw;
    for (std::size_t i : members) {
      raw.emplace_back(scope[i], std::vector<Value>{digits[i]});
    }
    elements.push_back(
        Element{Clause::canonicalize(doms, raw), std::exp(log_gamma)});

    std::size_t pos = n;
    while (pos > 0 && digits[pos - 1] == doms.card(scope[pos - 1]) - 1) {
      digits[--pos] = 0;
    }
    if (pos == 0) break;
    ++digits[pos - 1];
  }
  return MultiplicativeModel(doms,
                             std::vector<VarId>(scope.begin(), scope.end()),
                             std::move(elements), ModelKind::positive)
      .prune_units(tol);
}

MultiplicativeModel to_positive(const DomainTable& doms,
                                const MultiplicativeModel& m, double tol,
                                std::uint64_t cap) {
  const std::vector<double> values = to_table(doms, m, cap);
  return to_positive(doms, m.scope(), values, tol);
}

MultiplicativeModel from_decision_graph(const DomainTable& doms,
                                        const DecisionGraphSpec& spec) {
  std::vector<VarId> scope = spec.scope;
  if (scope.empty()) {
    for (const auto& [clause, _] : spec.paths) {
      for (const auto& constraint : clause.constraints()) {
        scope.push_back(constraint.var);
      }
    }
  }
  std::set<Clause> distinct;
  std::vector<Element> elements;
  elements.reserve(spec.paths.size());
  for (const auto& [clause, value] : spec.paths) {
    if (clause.is_bottom()) {
      throw NotAPartition("unsatisfiable path clause");
    }
    if (!distinct.insert(clause).second) {
      throw NotAPartition("duplicate path clause: " + clause.str());
    }
    elements.push_back(Element{clause, value});
  }
  MultiplicativeModel m(doms, std::move(scope), std::move(elements),
                        ModelKind::decision_graph);
  if (!validate_partition(doms, m)) {
    throw NotAPartition("path clauses do not partition the joint domain");
  }
  return m;
}

MultiplicativeModel from_noisy_or(const DomainTable& doms,
                                  const NoisyOrSpec& spec) {
  if (doms.card(spec.child) != 2) {
    throw FormatError("noisy-OR child must be binary");
  }
  std::set<VarId> parent_set;
  for (VarId p : spec.parents) {
    if (doms.card(p) != 2) throw FormatError("noisy-OR parents must be binary");
    if (p == spec.child || !parent_set.insert(p).second) {
      throw FormatError("noisy-OR parents must be distinct from each other "
                        "and the child");
    }
  }
  if (spec.inhibitors.size() != spec.parents.size()) {
    throw FormatError("need one inhibitor per parent");
  }
  if (!(spec.leak > 0.0) || spec.leak > 1.0) {
    throw FormatError("leak must lie in (0, 1]");
  }
  for (double q : spec.inhibitors) {
    if (q < 0.0 || q > 1.0) throw FormatError("inhibitors must lie in [0, 1]");
  }
  // Canonical parent order keeps construction (and thus serialization)
  // independent of how the spec listed the parents.
  std::vector<std::size_t> by_var(spec.parents.size());
  for (std::size_t i = 0; i < by_var.size(); ++i) by_var[i] = i;
  std::sort(by_var.begin(), by_var.end(), [&](std::size_t a, std::size_t b) {
    return spec.parents[a] < spec.parents[b];
  });
  std::vector<VarId> parents;
  std::vector<double> inhibitors;
  for (std::size_t i : by_var) {
    parents.push_back(spec.parents[i]);
    inhibitors.push_back(spec.inhibitors[i]);
  }
  const std::size_t m = parents.size();
  if (m > static_cast<std::size_t>(spec.parent_cap)) {
    throw TooManyParents("noisy-OR with " + std::to_string(m) +
                         " parents exceeds the cap of " +
                         std::to_string(spec.parent_cap));
  }

  std::vector<Element> elements;
  elements.reserve((std::size_t{1} << m) + m + 1);
  elements.push_back(Element{Clause::assignment(doms, {{spec.child, 0}}),
                             spec.leak});
  for (std::size_t i = 0; i < m; ++i) {
    elements.push_back(
        Element{Clause::assignment(doms, {{spec.child, 0},
                                          {parents[i], 1}}),
                inhibitors[i]});
  }
  for (std::uint64_t config = 0; config < (std::uint64_t{1} << m); ++config) {
    std::vector<std::pair<VarId, std::vector<Value>>> raw;
    raw.emplace_back(spec.child, std::vector<Value>{1});
    double off = spec.leak;
    for (std::size_t i = 0; i < m; ++i) {
      const Value v = (config >> i & 1) ? 1 : 0;
      raw.emplace_back(parents[i], std::vector<Value>{v});
      if (v == 1) off *= inhibitors[i];
    }
    elements.push_back(Element{Clause::canonicalize(doms, raw), 1.0 - off});
  }

  std::vector<VarId> scope = parents;
  scope.push_back(spec.child);
  return MultiplicativeModel(doms, std::move(scope), std::move(elements),
                             ModelKind::noisy_or);
}

MultiplicativeModel from_loglinear(const DomainTable& doms,
                                   const LogLinearSpec& spec) {
  std::vector<VarId> scope = spec.scope;
  if (scope.empty()) {
    for (const auto& term : spec.terms) {
      for (const auto& [var, _] : term.literals.items()) {
        scope.push_back(var);
      }
    }
  }
  std::map<Clause, double> by_clause;
  by_clause.emplace(Clause::top(), std::exp(spec.mu));
  for (const auto& term : spec.terms) {
    if (term.literals.empty()) {
      throw DuplicateTerm("term literals must be nonempty");
    }
    Clause clause = map_instance(doms, term.literals);
    auto [it, inserted] = by_clause.emplace(clause, std::exp(term.lambda));
    if (!inserted) {
      throw DuplicateTerm("repeated term literals: " + clause.str());
    }
  }
  std::vector<Element> elements;
  elements.reserve(by_clause.size());
  for (auto& [clause, gamma] : by_clause) {
    elements.push_back(Element{clause, gamma});
  }
  return MultiplicativeModel(doms, std::move(scope), std::move(elements),
                             ModelKind::log_linear);
}

std::vector<double> to_table(const DomainTable& doms,
                             const MultiplicativeModel& m, std::uint64_t cap) {
  const std::uint64_t joint = doms.joint_size(m.scope());
  if (joint > cap) {
    throw TooLarge("joint domain of " + std::to_string(joint) +
                   " instances exceeds the cap");
  }
  std::vector<double> values(joint);
  for (std::uint64_t i = 0; i < joint; ++i) {
    values[i] = m.evaluate(instance_at(doms, m.scope(), i));
  }
  return values;
}

}  // namespace multmodel
