#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "multmodel/model.hpp"

namespace multmodel {

/// Noisy-OR conditional distribution of a binary effect given binary
/// causes: P(child=0 | causes) = leak * prod over active causes of
/// inhibitors[i].
struct NoisyOrSpec {
  VarId child = 0;
  std::vector<VarId> parents;
  double leak = 1.0;  // in (0, 1]
  std::vector<double> inhibitors;
  int parent_cap = 20;
};

/// A value per root-to-leaf path; the path clauses must partition the joint
/// domain of the scope.
struct DecisionGraphSpec {
  std::vector<VarId> scope;
  std::vector<std::pair<Clause, double>> paths;
};

struct LogLinearTerm {
  Instance literals;  // nonempty, single-valued
  double lambda = 0.0;
};

struct LogLinearSpec {
  std::vector<VarId> scope;  // empty: use the union of term variables
  double mu = 0.0;
  std::vector<LogLinearTerm> terms;
};

/// Full-table factor: one element per joint instance of `scope`, indexed
/// row-major with the last listed variable fastest.
MultiplicativeModel from_table(const DomainTable& doms,
                               std::vector<VarId> scope,
                               std::span<const double> values);

/// Rewrites a strictly positive table into the parameterization whose
/// elements mention only non-zero values. Parameters come from alternating
/// sums of log table values over assignment subsets (computed in log
/// space), followed by prune_units(tol). Reconstruction matches the table
/// within accumulated rounding.
MultiplicativeModel to_positive(const DomainTable& doms,
                                std::span<const VarId> scope,
                                std::span<const double> values, double tol);

MultiplicativeModel to_positive(const DomainTable& doms,
                                const MultiplicativeModel& m, double tol,
                                std::uint64_t cap = kDefaultEnumerationCap);

MultiplicativeModel from_decision_graph(const DomainTable& doms,
                                        const DecisionGraphSpec& spec);

MultiplicativeModel from_noisy_or(const DomainTable& doms,
                                  const NoisyOrSpec& spec);

MultiplicativeModel from_loglinear(const DomainTable& doms,
                                   const LogLinearSpec& spec);

/// Evaluates the model at every full instance of its (sorted) scope,
/// row-major with the last scope variable fastest.
std::vector<double> to_table(const DomainTable& doms,
                             const MultiplicativeModel& m,
                             std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace multmodel
