#include "multmodel/oracle.hpp"

#include <algorithm>

#include "multmodel/errors.hpp"

namespace multmodel {

JointTable joint(const Network& net, std::uint64_t cap) {
  JointTable table;
  for (std::size_t v = 0; v < net.domains.num_vars(); ++v) {
    table.scope.push_back(static_cast<VarId>(v));
  }
  const std::uint64_t size = net.domains.joint_size(table.scope);
  if (size > cap) {
    throw TooLarge("joint of " + std::to_string(size) +
                   " instances exceeds the cap");
  }
  table.values.assign(size, 1.0);
  for (std::uint64_t i = 0; i < size; ++i) {
    const Instance x = instance_at(net.domains, table.scope, i);
    for (const auto& factor : net.factors) {
      table.values[i] *= factor.evaluate(x.restricted_to(factor.scope()));
    }
  }
  return table;
}

std::vector<double> marginal(const Network& net, std::span<const VarId> query,
                             const Instance& evidence, std::uint64_t cap) {
  std::vector<VarId> q(query.begin(), query.end());
  std::sort(q.begin(), q.end());
  q.erase(std::unique(q.begin(), q.end()), q.end());
  for (VarId v : q) {
    if (evidence.assigns(v)) {
      throw InvalidValue("query variable " + std::to_string(v) +
                         " is fixed by the evidence");
    }
  }

  // Enumerate only the unobserved variables; the evidence stays fixed.
  std::vector<VarId> free_vars;
  for (std::size_t v = 0; v < net.domains.num_vars(); ++v) {
    if (!evidence.assigns(static_cast<VarId>(v))) {
      free_vars.push_back(static_cast<VarId>(v));
    }
  }
  const std::uint64_t size = net.domains.joint_size(free_vars);
  if (size > cap) {
    throw TooLarge("marginalization over " + std::to_string(size) +
                   " instances exceeds the cap");
  }

  std::vector<double> values(net.domains.joint_size(q), 0.0);
  for (std::uint64_t i = 0; i < size; ++i) {
    const Instance x =
        instance_at(net.domains, free_vars, i).merged_with(evidence);
    double weight = 1.0;
    for (const auto& factor : net.factors) {
      weight *= factor.evaluate(x.restricted_to(factor.scope()));
    }
    values[joint_index(net.domains, q, x)] += weight;
  }
  return values;
}

}  // namespace multmodel
