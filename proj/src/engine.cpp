#include "multmodel/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <set>

#include "multmodel/errors.hpp"

namespace multmodel {

std::uint64_t EliminationTrace::total_multiplications() const {
  std::uint64_t total = 0;
  for (const auto& step : steps) total += step.multiplications;
  return total;
}

std::uint64_t EliminationTrace::total_additions() const {
  std::uint64_t total = 0;
  for (const auto& step : steps) total += step.additions;
  return total;
}

namespace {

std::vector<std::set<VarId>> interaction_graph(const Network& net) {
  std::vector<std::set<VarId>> adj(net.domains.num_vars());
  for (const auto& factor : net.factors) {
    for (const auto& element : factor.elements()) {
      const auto vars = element.clause.constrained_vars();
      for (std::size_t i = 0; i < vars.size(); ++i) {
        for (std::size_t j = i + 1; j < vars.size(); ++j) {
          adj[vars[i]].insert(vars[j]);
          adj[vars[j]].insert(vars[i]);
        }
      }
    }
  }
  return adj;
}

}  // namespace

std::vector<VarId> interaction_order(const Network& net,
                                     std::span<const VarId> kept,
                                     OrderingHeuristic heuristic,
                                     std::span<const VarId> explicit_order) {
  const std::size_t n = net.domains.num_vars();
  std::vector<bool> is_kept(n, false);
  for (VarId v : kept) {
    if (!net.domains.contains(v)) {
      throw InvalidValue("unknown variable " + std::to_string(v));
    }
    is_kept[v] = true;
  }
  std::vector<VarId> to_eliminate;
  for (std::size_t v = 0; v < n; ++v) {
    if (!is_kept[v]) to_eliminate.push_back(static_cast<VarId>(v));
  }

  if (heuristic == OrderingHeuristic::given) {
    std::vector<VarId> sorted(explicit_order.begin(), explicit_order.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted != to_eliminate) {
      throw OrderError(
          "explicit order is not a permutation of the variables to "
          "eliminate");
    }
    return {explicit_order.begin(), explicit_order.end()};
  }

  auto adj = interaction_graph(net);
  std::vector<bool> removed(n, false);
  std::vector<VarId> order;
  order.reserve(to_eliminate.size());

  auto live_neighbors = [&](VarId v) {
    std::vector<VarId> out;
    for (VarId u : adj[v]) {
      if (!removed[u]) out.push_back(u);
    }
    return out;
  };

  for (std::size_t round = 0; round < to_eliminate.size(); ++round) {
    VarId best = -1;
    std::uint64_t best_score = UINT64_MAX;
    for (VarId v : to_eliminate) {
      if (removed[v]) continue;
      const auto neighbors = live_neighbors(v);
      std::uint64_t score;
      if (heuristic == OrderingHeuristic::min_degree) {
        score = neighbors.size();
      } else {
        score = 0;  // fill edges needed among the neighbors
        for (std::size_t i = 0; i < neighbors.size(); ++i) {
          for (std::size_t j = i + 1; j < neighbors.size(); ++j) {
            if (!adj[neighbors[i]].count(neighbors[j])) ++score;
          }
        }
      }
      if (score < best_score) {
        best_score = score;
        best = v;
      }
    }
    const auto neighbors = live_neighbors(best);
    for (std::size_t i = 0; i < neighbors.size(); ++i) {
      for (std::size_t j = i + 1; j < neighbors.size(); ++j) {
        adj[neighbors[i]].insert(neighbors[j]);
        adj[neighbors[j]].insert(neighbors[i]);
      }
    }
    removed[best] = true;
    order.push_back(best);
  }
  return order;
}

std::vector<Clause> closure(std::span<const Clause> clauses, VarId v,
                            std::size_t cap) {
  std::set<Clause> closed;
  std::vector<Clause> worklist;
  auto add = [&](Clause c) {
    if (closed.insert(c).second) {
      if (closed.size() > cap) {
        throw CapacityExceeded("conjunction closure exceeds the cap");
      }
      worklist.push_back(std::move(c));
    }
  };
  add(Clause::top());
  for (const Clause& s : clauses) add(project(s, v));
  while (!worklist.empty()) {
    const Clause current = std::move(worklist.back());
    worklist.pop_back();
    const std::vector<Clause> snapshot(closed.begin(), closed.end());
    for (const Clause& other : snapshot) {
      Clause both = conjoin(current, other);
      if (!both.is_bottom()) add(std::move(both));
    }
  }
  return {closed.begin(), closed.end()};
}

namespace {

// Grade compatible with the lattice order: strictly smaller clauses get
// strictly smaller grades, so (grade, canonical order) is a linear
// extension of the order.
std::uint64_t specificity(const DomainTable& doms, const Clause& c) {
  std::uint64_t g = 0;
  for (const auto& constraint : c.constraints()) {
    g += static_cast<std::uint64_t>(doms.card(constraint.var)) -
         constraint.values.size();
  }
  return g;
}

std::vector<VarId> merged_scope(std::span<const Bucket> buckets, VarId v) {
  std::set<VarId> vars;
  for (const auto& bucket : buckets) {
    for (const auto& element : bucket.elements) {
      for (const auto& constraint : element.clause.constraints()) {
        vars.insert(constraint.var);
      }
    }
  }
  vars.erase(v);
  return {vars.begin(), vars.end()};
}

// A bucket is a structurally full table when all elements constrain the
// same variable set with single values and every joint instance occurs
// exactly once. Returns the dense parameter grid indexed over the sorted
// variable set, or nullopt.
struct DenseBucket {
  std::vector<VarId> vars;  // sorted, includes the eliminated variable
  std::vector<double> gammas;
};

std::optional<DenseBucket> as_full_table(const DomainTable& doms,
                                         const Bucket& bucket, VarId v) {
  if (bucket.elements.empty()) return std::nullopt;
  DenseBucket dense;
  dense.vars = bucket.elements.front().clause.constrained_vars();
  if (!std::binary_search(dense.vars.begin(), dense.vars.end(), v)) {
    return std::nullopt;
  }
  const auto joint = doms.try_joint_size(dense.vars);
  if (!joint || bucket.elements.size() != *joint) return std::nullopt;
  dense.gammas.assign(*joint, std::numeric_limits<double>::quiet_NaN());
  for (const auto& element : bucket.elements) {
    std::uint64_t index = 0;
    auto it = element.clause.constraints().begin();
    for (VarId var : dense.vars) {
      if (it == element.clause.constraints().end() || it->var != var ||
          it->values.size() != 1) {
        return std::nullopt;
      }
      index = index * static_cast<std::uint64_t>(doms.card(var)) +
              static_cast<std::uint64_t>(it->values.front());
      ++it;
    }
    if (it != element.clause.constraints().end()) return std::nullopt;
    if (!std::isnan(dense.gammas[index])) return std::nullopt;
    dense.gammas[index] = element.gamma;
  }
  return dense;
}

EliminateResult eliminate_tables(const DomainTable& doms, VarId v,
                                 std::span<const DenseBucket> buckets,
                                 std::vector<VarId> result_scope,
                                 const EliminateOptions& options) {
  EliminationStep step;
  step.var = v;
  step.table_path = true;
  step.result_scope = result_scope;
  for (const auto& bucket : buckets) {
    std::vector<VarId> context = bucket.vars;
    context.erase(std::find(context.begin(), context.end(), v));
    step.closure_sizes.push_back(doms.joint_size(context));
  }

  const std::uint64_t joint = doms.joint_size(result_scope);
  if (joint > options.candidate_cap) {
    throw CapacityExceeded("candidate set of " + std::to_string(joint) +
                           " instances exceeds the cap");
  }
  step.candidate_count = joint;

  const int card = doms.card(v);
  std::vector<Element> elements;
  elements.reserve(joint);
  for (std::uint64_t i = 0; i < joint; ++i) {
    const Instance u = instance_at(doms, result_scope, i);
    double sum = 0.0;
    for (int val = 0; val < card; ++val) {
      double term = 1.0;
      for (const auto& bucket : buckets) {
        std::uint64_t index = 0;
        for (VarId var : bucket.vars) {
          const Value value = var == v ? val : *u.value(var);
          index = index * static_cast<std::uint64_t>(doms.card(var)) +
                  static_cast<std::uint64_t>(value);
        }
        term *= bucket.gammas[index];
        ++step.multiplications;
      }
      sum += term;
      ++step.additions;
    }
    elements.push_back(Element{map_instance(doms, u), sum});
  }
  step.emitted_count = elements.size();
  return EliminateResult{
      MultiplicativeModel::unchecked(std::move(result_scope),
                                     std::move(elements), ModelKind::table),
      std::move(step)};
}

void check_unique_maximum(const DomainTable& doms,
                          std::span<const Clause> candidates,
                          std::span<const VarId> scope,
                          std::uint64_t joint_cap) {
  const auto joint = doms.try_joint_size(scope);
  if (!joint || *joint > joint_cap) return;
  for (std::uint64_t i = 0; i < *joint; ++i) {
    const Instance u = instance_at(doms, scope, i);
    std::vector<const Clause*> satisfied;
    for (const Clause& r : candidates) {
      if (satisfies(u, r)) satisfied.push_back(&r);
    }
    bool found = false;
    for (const Clause* top : satisfied) {
      bool maximal = true;
      for (const Clause* r : satisfied) {
        if (!leq(*r, *top)) {
          maximal = false;
          break;
        }
      }
      if (maximal) {
        found = true;
        break;
      }
    }
    if (!found) {
      throw Error("no unique maximal candidate at instance " + u.str());
    }
  }
}

}  // namespace

EliminateResult eliminate(const DomainTable& doms, VarId v,
                          std::span<const Bucket> buckets,
                          const EliminateOptions& options) {
  for (const auto& bucket : buckets) {
    for (const auto& element : bucket.elements) {
      if (!relevance(element.clause, v)) {
        throw FormatError("bucket element does not constrain variable " +
                          std::to_string(v));
      }
    }
  }
  std::vector<VarId> result_scope = merged_scope(buckets, v);

  if (options.table_specialization) {
    std::vector<DenseBucket> dense;
    dense.reserve(buckets.size());
    bool all_tables = true;
    for (const auto& bucket : buckets) {
      auto d = as_full_table(doms, bucket, v);
      if (!d) {
        all_tables = false;
        break;
      }
      dense.push_back(std::move(*d));
    }
    if (all_tables) {
      return eliminate_tables(doms, v, dense, std::move(result_scope),
                              options);
    }
  }

  EliminationStep step;
  step.var = v;
  step.result_scope = result_scope;

  // Candidate set: cross-bucket conjunctions of the per-bucket closures.
  std::set<Clause> candidates;
  candidates.insert(Clause::top());
  for (const auto& bucket : buckets) {
    std::vector<Clause> clauses;
    clauses.reserve(bucket.elements.size());
    for (const auto& element : bucket.elements) {
      clauses.push_back(element.clause);
    }
    const std::vector<Clause> bucket_closure =
        closure(clauses, v, options.candidate_cap);
    step.closure_sizes.push_back(bucket_closure.size());
    std::set<Clause> next;
    for (const Clause& r : candidates) {
      for (const Clause& c : bucket_closure) {
        Clause both = conjoin(r, c);
        if (both.is_bottom()) continue;
        next.insert(std::move(both));
        if (next.size() > options.candidate_cap) {
          throw CapacityExceeded("candidate set exceeds the cap");
        }
      }
    }
    candidates = std::move(next);
  }
  step.candidate_count = candidates.size();

  // Minimal-first linear extension: grade, then canonical order.
  std::vector<Clause> ordered(candidates.begin(), candidates.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [&](const Clause& a, const Clause& b) {
                     const auto ga = specificity(doms, a);
                     const auto gb = specificity(doms, b);
                     if (ga != gb) return ga < gb;
                     return compare(a, b) < 0;
                   });

  if (options.check_unique_maximum) {
    check_unique_maximum(doms, ordered, result_scope, options.check_joint_cap);
  }

  const int card = doms.card(v);
  std::vector<Element> emitted;
  for (const Clause& r : ordered) {
    double num = 0.0;
    for (int val = 0; val < card; ++val) {
      const Clause rv =
          conjoin(r, Clause::assignment(doms, {{v, val}}));
      double term = 1.0;
      for (const auto& bucket : buckets) {
        for (const auto& element : bucket.elements) {
          if (leq(element.clause, rv)) {
            term *= element.gamma;
            ++step.multiplications;
          }
        }
      }
      num += term;
      ++step.additions;
    }
    double denom = 1.0;
    int zero_factors = 0;
    for (const auto& prior : emitted) {
      if (leq(prior.clause, r)) {
        if (prior.gamma == 0.0) {
          ++zero_factors;
        } else {
          denom *= prior.gamma;
        }
        ++step.multiplications;
      }
    }
    double gamma;
    if (zero_factors == 0) {
      gamma = num / denom;
    } else if (num == 0.0) {
      gamma = 1.0;  // pruned below
    } else {
      throw DegenerateZero("zero divisor with nonzero numerator at " +
                           r.str() + " while eliminating variable " +
                           std::to_string(v));
    }
    if (std::abs(gamma - 1.0) > options.prune_tol) {
      emitted.push_back(Element{r, gamma});
    }
  }
  step.emitted_count = emitted.size();
  return EliminateResult{
      MultiplicativeModel::unchecked(std::move(result_scope),
                                     std::move(emitted), ModelKind::general),
      std::move(step)};
}

QueryResult run_query(const Network& net, std::vector<VarId> query,
                      const Instance& evidence, const EngineOptions& options) {
  if (query.empty()) throw InvalidValue("query must name a variable");
  std::sort(query.begin(), query.end());
  query.erase(std::unique(query.begin(), query.end()), query.end());
  for (VarId q : query) {
    if (!net.domains.contains(q)) {
      throw InvalidValue("unknown query variable " + std::to_string(q));
    }
    if (evidence.assigns(q)) {
      throw InvalidValue("query variable " + std::to_string(q) +
                         " is fixed by the evidence");
    }
  }

  std::vector<MultiplicativeModel> live;
  live.reserve(net.factors.size());
  for (const auto& factor : net.factors) {
    live.push_back(factor.condition(
        evidence.restricted_to(factor.scope())));
  }

  std::vector<VarId> kept = query;
  for (const auto& [var, _] : evidence.items()) kept.push_back(var);
  const std::vector<VarId> order = interaction_order(
      Network{net.domains, live}, kept, options.heuristic, options.order);

  QueryResult result;
  result.query = query;
  for (VarId var : order) {
    std::optional<Network> before;
    if (options.observer) before = Network{net.domains, live};

    std::vector<Bucket> buckets;
    for (auto& model : live) {
      Bucket bucket;
      std::vector<Element> rest;
      for (const auto& element : model.elements()) {
        if (relevance(element.clause, var)) {
          bucket.elements.push_back(element);
        } else {
          rest.push_back(element);
        }
      }
      std::vector<VarId> scope;
      for (VarId s : model.scope()) {
        if (s != var) scope.push_back(s);
      }
      model = MultiplicativeModel::unchecked(std::move(scope),
                                             std::move(rest), model.kind());
      if (!bucket.elements.empty()) buckets.push_back(std::move(bucket));
    }

    EliminateResult eliminated =
        eliminate(net.domains, var, buckets, options.eliminate);
    live.push_back(std::move(eliminated.model));
    result.trace.steps.push_back(std::move(eliminated.step));

    if (options.observer) {
      options.observer->after_eliminate(var, *before,
                                        Network{net.domains, live});
    }
  }

  const std::uint64_t joint = net.domains.joint_size(result.query);
  result.values.assign(joint, 1.0);
  for (std::uint64_t i = 0; i < joint; ++i) {
    const Instance q = instance_at(net.domains, result.query, i);
    for (const auto& model : live) {
      if (model.elements().empty()) continue;
      result.values[i] *= model.evaluate(q.restricted_to(model.scope()));
    }
    result.normalizer += result.values[i];
  }
  return result;
}

QueryResult normalize(const QueryResult& result) {
  if (result.normalizer == 0.0) {
    throw ZeroEvidenceProbability("query result sums to zero");
  }
  QueryResult out = result;
  for (double& v : out.values) v /= result.normalizer;
  out.normalizer = 1.0;
  return out;
}

}  // namespace multmodel
