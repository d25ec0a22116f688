#pragma once

#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "multmodel/types.hpp"

namespace multmodel {

/// One per-variable restriction: the variable must take a value from
/// `values`. In canonical clauses every stored set is a proper nonempty
/// subset of the variable's domain, sorted and duplicate-free.
struct VarConstraint {
  VarId var = 0;
  std::vector<Value> values;
  bool operator==(const VarConstraint&) const = default;
};

/// A product-form propositional clause: a conjunction of per-variable value
/// disjunctions. The empty conjunction is true (top); the distinguished
/// unsatisfiable clause is bottom. Clauses are immutable values and every
/// operation below is pure.
class Clause {
 public:
  Clause() = default;  // top

  static Clause top() { return Clause(); }
  static Clause bottom();

  /// Canonicalizes raw per-variable value sets: full-domain sets are
  /// dropped, an empty set yields bottom, duplicates of the same variable
  /// are intersected. Throws InvalidValue for unknown variables or
  /// out-of-domain values.
  static Clause canonicalize(
      const DomainTable& doms,
      std::span<const std::pair<VarId, std::vector<Value>>> raw);

  static Clause of(const DomainTable& doms,
                   std::initializer_list<std::pair<VarId, std::vector<Value>>>
                       raw);

  /// Conjunction of single-value literals, one per assigned variable.
  static Clause assignment(const DomainTable& doms,
                           std::initializer_list<std::pair<VarId, Value>> a);

  bool is_bottom() const { return bottom_; }
  bool is_top() const { return !bottom_ && constraints_.empty(); }

  std::span<const VarConstraint> constraints() const { return constraints_; }
  std::size_t arity() const { return constraints_.size(); }
  bool constrains(VarId v) const { return allowed(v) != nullptr; }
  const std::vector<Value>* allowed(VarId v) const;
  std::vector<VarId> constrained_vars() const;

  std::string str() const;

  bool operator==(const Clause&) const = default;

 private:
  friend Clause conjoin(const Clause&, const Clause&);
  friend Clause project(const Clause&, VarId);
  friend class ClauseBuilder;

  bool bottom_ = false;
  std::vector<VarConstraint> constraints_;  // sorted by var
};

/// Canonical total order: by constraint count, then variable sequence, then
/// value-set contents; bottom sorts last. Used for deterministic iteration
/// and tie-breaking; consistent with but finer than the lattice order.
int compare(const Clause& a, const Clause& b);
inline bool operator<(const Clause& a, const Clause& b) {
  return compare(a, b) < 0;
}

/// Least upper bound: per-variable intersection of allowed sets. Bottom if
/// any intersection empties or either input is bottom.
Clause conjoin(const Clause& a, const Clause& b);

/// Removes the constraint on V, leaving everything else unchanged.
/// Throws BottomProjection when s is bottom.
Clause project(const Clause& s, VarId v);

/// True iff c is implied by cp (c precedes cp in the lattice order).
bool leq(const Clause& c, const Clause& cp);

/// The mapping from a partial assignment to the conjunction of its
/// variable=value literals.
Clause map_instance(const DomainTable& doms, const Instance& z);

/// True iff changing the value of V alone can flip satisfaction of s.
bool relevance(const Clause& s, VarId v);

/// True iff d satisfies s; equals leq(s, map_instance(d)). The instance
/// must assign every variable s constrains (ScopeError otherwise).
bool satisfies(const Instance& d, const Clause& s);

}  // namespace multmodel
