#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "multmodel/network.hpp"

namespace multmodel {

/// Dense joint values over every network variable, row-major with the last
/// variable fastest.
struct JointTable {
  std::vector<VarId> scope;
  std::vector<double> values;
};

/// Brute-force reference semantics: the value at x is the product of every
/// factor at x. Throws TooLarge above the cap.
JointTable joint(const Network& net,
                 std::uint64_t cap = kDefaultEnumerationCap);

/// Unnormalized query values: the joint restricted to the evidence, summed
/// over all remaining variables. Indexed over the sorted query scope, last
/// variable fastest.
std::vector<double> marginal(const Network& net, std::span<const VarId> query,
                             const Instance& evidence,
                             std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace multmodel
