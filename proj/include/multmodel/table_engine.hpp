#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "multmodel/network.hpp"

namespace multmodel {

/// Reference dense variable elimination over full tables. Factors are
/// expanded to their joint tables up front; buckets are gathered by scope
/// membership, merged cellwise, and summed out. Used as the comparison
/// engine in benchmarks and validation.
struct TableStep {
  VarId var = -1;
  std::uint64_t merged_joint = 0;  // joint size of the merged scope minus var
  std::uint64_t multiplications = 0;
  std::uint64_t additions = 0;
};

struct TableVeResult {
  std::vector<VarId> query;  // sorted
  std::vector<double> values;
  double normalizer = 0.0;
  std::vector<TableStep> steps;

  std::uint64_t total_multiplications() const;
  std::uint64_t total_additions() const;
};

/// `order` must cover exactly the non-query, non-evidence variables.
TableVeResult table_ve(const Network& net, std::vector<VarId> query,
                       const Instance& evidence,
                       std::span<const VarId> order);

}  // namespace multmodel
