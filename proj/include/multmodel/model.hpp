#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "multmodel/clause.hpp"
#include "multmodel/types.hpp"

namespace multmodel {

/// Provenance tag; informational only. Structure and parameters alone define
/// the factor's semantics.
enum class ModelKind {
  general,
  table,
  positive,
  decision_graph,
  noisy_or,
  log_linear,
};

const char* to_string(ModelKind kind);

struct Element {
  Clause clause;
  double gamma = 1.0;
  bool operator==(const Element&) const = default;
};

struct ModelStats {
  std::size_t element_count = 0;
  std::size_t max_arity = 0;
  /// Sum over scope instances of the number of elements each satisfies.
  std::uint64_t naive_op_count = 0;
  /// True when naive_op_count saturated and holds the upper bound
  /// element_count * joint size instead of the exact sum.
  bool naive_op_count_is_bound = false;
  std::size_t scope_size = 0;
};

/// A factor in product form: a set of clauses with real parameters. The
/// value at a full scope instance is the product of the parameters of every
/// satisfied clause (1 when none is). Models are immutable after
/// construction; conditioning and pruning return new models.
class MultiplicativeModel {
 public:
  MultiplicativeModel() = default;

  /// Validates: no bottom clause, pairwise-distinct clauses, constrained
  /// variables within `scope`, scope within the domain table.
  MultiplicativeModel(const DomainTable& doms, std::vector<VarId> scope,
                      std::vector<Element> elements,
                      ModelKind kind = ModelKind::general);

  const std::vector<VarId>& scope() const { return scope_; }
  const std::vector<Element>& elements() const { return elements_; }
  ModelKind kind() const { return kind_; }

  /// Product of gamma over elements satisfied by d; the instance must
  /// assign every scope variable.
  double evaluate(const Instance& d) const;

  /// Drops every element with |gamma - 1| <= tol.
  MultiplicativeModel prune_units(double tol) const;

  /// Conditions on the evidence assignment: elements inconsistent with it
  /// are dropped, survivors lose their evidence-variable constraints (with
  /// coinciding clauses merged by parameter product), and the evidence
  /// variables leave the scope. For every completion u of the remaining
  /// scope, result.evaluate(u) == evaluate(u + e). Evidence variables must
  /// lie in the scope.
  MultiplicativeModel condition(const Instance& e) const;

  /// Internal/bulk constructor: skips invariant validation.
  static MultiplicativeModel unchecked(std::vector<VarId> sorted_scope,
                                       std::vector<Element> elements,
                                       ModelKind kind);

  bool operator==(const MultiplicativeModel&) const = default;

 private:
  std::vector<VarId> scope_;  // sorted
  std::vector<Element> elements_;
  ModelKind kind_ = ModelKind::general;
};

inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1}
                                                        << 24;

/// True iff every full scope instance satisfies exactly one element.
/// Enumerates when the joint fits under `enumeration_cap`; otherwise falls
/// back to a pairwise-disjointness check plus a counting cover check.
/// Throws ValidationSkipped when neither route is feasible.
bool validate_partition(const DomainTable& doms, const MultiplicativeModel& m,
                        std::uint64_t enumeration_cap = kDefaultEnumerationCap);

ModelStats stats(const DomainTable& doms, const MultiplicativeModel& m);

}  // namespace multmodel
