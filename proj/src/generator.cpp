#include "multmodel/generator.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "multmodel/builders.hpp"
#include "multmodel/errors.hpp"

namespace multmodel {

namespace {

using Rng = std::mt19937_64;

int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

double uniform_real(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::vector<VarId> random_subset(Rng& rng, std::span<const VarId> pool,
                                 std::size_t size) {
  std::vector<VarId> vars(pool.begin(), pool.end());
  std::shuffle(vars.begin(), vars.end(), rng);
  vars.resize(size);
  std::sort(vars.begin(), vars.end());
  return vars;
}

void random_paths(Rng& rng, const DomainTable& doms,
                  std::vector<VarId> available,
                  std::vector<std::pair<VarId, std::vector<Value>>> prefix,
                  std::vector<std::pair<Clause, double>>& out) {
  const bool leaf = available.empty() || uniform_real(rng, 0.0, 1.0) < 0.3;
  if (leaf) {
    out.emplace_back(Clause::canonicalize(doms, prefix),
                     uniform_real(rng, 0.1, 2.0));
    return;
  }
  const std::size_t pick =
      static_cast<std::size_t>(uniform_int(rng, 0, available.size() - 1));
  const VarId var = available[pick];
  available.erase(available.begin() + pick);

  std::vector<Value> values(doms.card(var));
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = i;
  std::shuffle(values.begin(), values.end(), rng);
  const int groups = uniform_int(rng, 1, static_cast<int>(values.size()));
  std::vector<std::vector<Value>> split(groups);
  for (std::size_t i = 0; i < values.size(); ++i) {
    // first one value per group, then the rest at random
    const int g = i < static_cast<std::size_t>(groups)
                      ? static_cast<int>(i)
                      : uniform_int(rng, 0, groups - 1);
    split[g].push_back(values[i]);
  }
  for (auto& group : split) {
    auto child_prefix = prefix;
    child_prefix.emplace_back(var, group);
    random_paths(rng, doms, available, std::move(child_prefix), out);
  }
}

MultiplicativeModel random_factor(Rng& rng, const DomainTable& doms,
                                  const RandomNetworkParams& params) {
  std::vector<VarId> all_vars;
  std::vector<VarId> binary_vars;
  for (std::size_t v = 0; v < doms.num_vars(); ++v) {
    all_vars.push_back(static_cast<VarId>(v));
    if (doms.card(static_cast<VarId>(v)) == 2) {
      binary_vars.push_back(static_cast<VarId>(v));
    }
  }

  int kind = params.tables_only ? 0 : uniform_int(rng, 0, 3);
  if (kind == 2 && binary_vars.size() < 2) kind = 0;

  switch (kind) {
    case 1: {  // decision graph
      const std::size_t arity = static_cast<std::size_t>(uniform_int(
          rng, 1, std::min<int>(params.max_scope, all_vars.size())));
      const auto scope = random_subset(rng, all_vars, arity);
      std::vector<std::pair<Clause, double>> paths;
      random_paths(rng, doms, scope, {}, paths);
      return from_decision_graph(doms, DecisionGraphSpec{scope, paths});
    }
    case 2: {  // noisy-OR
      const std::size_t count = static_cast<std::size_t>(uniform_int(
          rng, 2, std::min<int>(binary_vars.size(),
                                std::min(params.max_scope + 1, 5))));
      const auto vars = random_subset(rng, binary_vars, count);
      NoisyOrSpec spec;
      spec.child = vars.back();
      spec.parents.assign(vars.begin(), vars.end() - 1);
      spec.leak = uniform_real(rng, 0.85, 1.0);
      for (std::size_t i = 0; i < spec.parents.size(); ++i) {
        spec.inhibitors.push_back(uniform_real(rng, 0.1, 0.9));
      }
      return from_noisy_or(doms, spec);
    }
    case 3: {  // log-linear
      LogLinearSpec spec;
      const std::size_t arity = static_cast<std::size_t>(uniform_int(
          rng, 1, std::min<int>(params.max_scope, all_vars.size())));
      spec.scope = random_subset(rng, all_vars, arity);
      spec.mu = uniform_real(rng, -0.5, 0.5);
      std::set<Clause> seen;
      const int terms = uniform_int(rng, 1, 4);
      for (int t = 0; t < terms; ++t) {
        const std::size_t lits = static_cast<std::size_t>(
            uniform_int(rng, 1, static_cast<int>(spec.scope.size())));
        std::vector<std::pair<VarId, Value>> items;
        for (VarId v : random_subset(rng, spec.scope, lits)) {
          items.emplace_back(v, uniform_int(rng, 0, doms.card(v) - 1));
        }
        const Instance literals = Instance::from_pairs(doms, items);
        if (!seen.insert(map_instance(doms, literals)).second) continue;
        spec.terms.push_back(
            LogLinearTerm{literals, uniform_real(rng, -0.7, 0.7)});
      }
      return from_loglinear(doms, spec);
    }
    default: {  // full table
      const std::size_t arity = static_cast<std::size_t>(uniform_int(
          rng, 1, std::min<int>(params.max_scope, all_vars.size())));
      const auto scope = random_subset(rng, all_vars, arity);
      std::vector<double> values(doms.joint_size(scope));
      for (double& v : values) v = uniform_real(rng, 0.1, 2.0);
      return from_table(doms, scope, values);
    }
  }
}

}  // namespace

Network random_network(std::uint64_t seed, const RandomNetworkParams& params) {
  Rng rng(seed);
  const int n = uniform_int(rng, params.min_vars, params.max_vars);
  std::vector<int> cards(n, 2);
  if (!params.binary_only) {
    for (int& c : cards) c = uniform_int(rng, 2, params.max_card);
    // keep the joint enumerable for the reference oracle
    std::uint64_t joint = 1;
    for (int& c : cards) {
      if (joint * c > params.joint_cap) c = 2;
      joint *= static_cast<std::uint64_t>(c);
    }
  }
  Network net;
  net.domains = DomainTable(cards);
  const int factors = uniform_int(rng, params.min_factors, params.max_factors);
  for (int i = 0; i < factors; ++i) {
    net.factors.push_back(random_factor(rng, net.domains, params));
  }
  return net;
}

Network noisy_or_bipartite(std::uint64_t seed,
                           const BipartiteNoisyOrParams& params) {
  Rng rng(seed);
  const int d = params.diseases;
  const int f = params.findings;
  Network net;
  net.domains = DomainTable(std::vector<int>(d + f, 2));

  for (int i = 0; i < d; ++i) {
    const double p1 = uniform_real(rng, 0.01, 0.2);
    net.factors.push_back(
        from_table(net.domains, {i}, std::vector<double>{1.0 - p1, p1}));
  }
  std::vector<VarId> diseases(d);
  for (int i = 0; i < d; ++i) diseases[i] = i;

  for (int j = 0; j < f; ++j) {
    NoisyOrSpec spec;
    spec.child = d + j;
    if (params.windowed) {
      const int start = (j * 7) % d;
      for (int k = 0; k < params.parents_min; ++k) {
        spec.parents.push_back((start + k) % d);
      }
      std::sort(spec.parents.begin(), spec.parents.end());
    } else {
      const int count = uniform_int(rng, params.parents_min,
                                    params.parents_max);
      spec.parents = random_subset(rng, diseases, count);
    }
    spec.leak = uniform_real(rng, 0.85, 1.0);
    for (std::size_t k = 0; k < spec.parents.size(); ++k) {
      spec.inhibitors.push_back(uniform_real(rng, 0.1, 0.9));
    }
    net.factors.push_back(from_noisy_or(net.domains, spec));
  }
  return net;
}

}  // namespace multmodel
