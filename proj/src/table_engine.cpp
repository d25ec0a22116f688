#include "multmodel/table_engine.hpp"

#include <algorithm>
#include <set>

#include "multmodel/builders.hpp"
#include "multmodel/errors.hpp"

namespace multmodel {

std::uint64_t TableVeResult::total_multiplications() const {
  std::uint64_t total = 0;
  for (const auto& step : steps) total += step.multiplications;
  return total;
}

std::uint64_t TableVeResult::total_additions() const {
  std::uint64_t total = 0;
  for (const auto& step : steps) total += step.additions;
  return total;
}

namespace {

struct TableFactor {
  std::vector<VarId> scope;  // sorted, last variable fastest
  std::vector<double> values;
};

double at(const DomainTable& doms, const TableFactor& factor,
          const Instance& full) {
  return factor.values[joint_index(doms, factor.scope, full)];
}

TableFactor conditioned(const DomainTable& doms, const TableFactor& factor,
                        const Instance& evidence) {
  TableFactor out;
  for (VarId v : factor.scope) {
    if (!evidence.assigns(v)) out.scope.push_back(v);
  }
  if (out.scope.size() == factor.scope.size()) return factor;
  const std::uint64_t size = doms.joint_size(out.scope);
  out.values.reserve(size);
  for (std::uint64_t i = 0; i < size; ++i) {
    const Instance u =
        instance_at(doms, out.scope, i).merged_with(
            evidence.restricted_to(factor.scope));
    out.values.push_back(at(doms, factor, u));
  }
  return out;
}

}  // namespace

TableVeResult table_ve(const Network& net, std::vector<VarId> query,
                       const Instance& evidence,
                       std::span<const VarId> order) {
  std::sort(query.begin(), query.end());
  query.erase(std::unique(query.begin(), query.end()), query.end());

  std::vector<TableFactor> live;
  live.reserve(net.factors.size());
  for (const auto& factor : net.factors) {
    TableFactor dense{factor.scope(), to_table(net.domains, factor)};
    live.push_back(conditioned(net.domains, dense, evidence));
  }

  TableVeResult result;
  result.query = query;
  for (VarId var : order) {
    std::vector<TableFactor> bucket;
    std::vector<TableFactor> rest;
    for (auto& factor : live) {
      if (std::binary_search(factor.scope.begin(), factor.scope.end(), var)) {
        bucket.push_back(std::move(factor));
      } else {
        rest.push_back(std::move(factor));
      }
    }
    live = std::move(rest);

    TableStep step;
    step.var = var;
    std::set<VarId> merged_vars;
    for (const auto& factor : bucket) {
      merged_vars.insert(factor.scope.begin(), factor.scope.end());
    }
    merged_vars.erase(var);
    TableFactor merged;
    merged.scope.assign(merged_vars.begin(), merged_vars.end());
    const std::uint64_t out_size = net.domains.joint_size(merged.scope);
    step.merged_joint = out_size;
    merged.values.reserve(out_size);
    const int card = net.domains.card(var);
    for (std::uint64_t i = 0; i < out_size; ++i) {
      const Instance u = instance_at(net.domains, merged.scope, i);
      double sum = 0.0;
      for (int val = 0; val < card; ++val) {
        const Instance full = u.merged_with(
            Instance::over(net.domains, {{var, val}}));
        double term = 1.0;
        for (const auto& factor : bucket) {
          term *= at(net.domains, factor, full);
          ++step.multiplications;
        }
        sum += term;
        ++step.additions;
      }
      merged.values.push_back(sum);
    }
    live.push_back(std::move(merged));
    result.steps.push_back(step);
  }

  const std::uint64_t joint = net.domains.joint_size(query);
  result.values.assign(joint, 1.0);
  for (std::uint64_t i = 0; i < joint; ++i) {
    const Instance q = instance_at(net.domains, query, i);
    for (const auto& factor : live) {
      result.values[i] *= at(net.domains, factor, q);
    }
    result.normalizer += result.values[i];
  }
  return result;
}

}  // namespace multmodel
