#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "multmodel/model.hpp"
#include "multmodel/network.hpp"
#include "multmodel/types.hpp"

namespace multmodel {

enum class OrderingHeuristic { given, min_degree, min_fill };

/// Per-variable instrumentation of one elimination step.
struct EliminationStep {
  VarId var = -1;
  std::size_t candidate_count = 0;          // |R|
  std::vector<std::size_t> closure_sizes;   // |R_i| per bucket
  std::uint64_t multiplications = 0;
  std::uint64_t additions = 0;
  std::size_t emitted_count = 0;
  std::vector<VarId> result_scope;  // constrained-variable union minus var
  bool table_path = false;
};

struct EliminationTrace {
  std::vector<EliminationStep> steps;

  std::uint64_t total_multiplications() const;
  std::uint64_t total_additions() const;
};

/// Unnormalized result over the query scope, row-major with the last
/// (sorted) query variable fastest.
struct QueryResult {
  std::vector<VarId> query;  // sorted
  std::vector<double> values;
  double normalizer = 0.0;
  EliminationTrace trace;
};

/// Test/diagnostic hook: called after each elimination with the live factor
/// sets before and after the step.
class StepObserver {
 public:
  virtual ~StepObserver() = default;
  virtual void after_eliminate(VarId var, const Network& before,
                               const Network& after) = 0;
};

struct EliminateOptions {
  double prune_tol = 1e-12;           // unit pruning inside elimination
  std::size_t candidate_cap = 1'000'000;
  /// When every bucket is structurally a full table, compute the candidate
  /// set as the dense instance grid of the merged scope (classic variable
  /// elimination) instead of the conjunction closure.
  bool table_specialization = false;
  bool check_unique_maximum = false;
  std::uint64_t check_joint_cap = 4096;
};

struct EngineOptions {
  OrderingHeuristic heuristic = OrderingHeuristic::min_degree;
  std::vector<VarId> order;  // required for OrderingHeuristic::given
  EliminateOptions eliminate;
  StepObserver* observer = nullptr;

  EngineOptions() { eliminate.table_specialization = true; }
};

/// Elimination order over the variables outside `kept`. Heuristic orders
/// work on the interaction graph, which joins two variables whenever some
/// element constrains both.
std::vector<VarId> interaction_order(const Network& net,
                                     std::span<const VarId> kept,
                                     OrderingHeuristic heuristic,
                                     std::span<const VarId> explicit_order = {});

/// Conjunction closure of the projections of `clauses` onto everything but
/// `v`, including top; unsatisfiable results and duplicates are dropped.
/// Every input clause must constrain v.
std::vector<Clause> closure(std::span<const Clause> clauses, VarId v,
                            std::size_t cap = 1'000'000);

/// One bucket: the elements gathered from a single live factor, all of
/// which constrain the variable being eliminated.
struct Bucket {
  std::vector<Element> elements;
};

struct EliminateResult {
  MultiplicativeModel model;
  EliminationStep step;
};

/// Sums the eliminated variable out of the bucket product. Candidates are
/// cross-bucket conjunctions of the per-bucket closures, processed minimal
/// first; each parameter is the marginal sum of matching products divided
/// by the parameters already emitted below it. For every instance u of the
/// remaining scope, the product of emitted parameters over satisfied
/// elements equals the sum over v of the bucket product at (u, v).
EliminateResult eliminate(const DomainTable& doms, VarId v,
                          std::span<const Bucket> buckets,
                          const EliminateOptions& options = {});

/// Variable elimination over the network: conditions every factor on the
/// evidence, eliminates all non-query non-evidence variables in order, and
/// evaluates the product of the surviving factors at every query instance.
/// Values are unnormalized; the normalizer is their sum. A query runs
/// sequentially and deterministically; networks are immutable, so
/// concurrent independent queries on one network are safe.
QueryResult run_query(const Network& net, std::vector<VarId> query,
                      const Instance& evidence,
                      const EngineOptions& options = {});

/// Divides the values by the normalizer; ZeroEvidenceProbability when it is
/// exactly zero.
QueryResult normalize(const QueryResult& result);

}  // namespace multmodel
