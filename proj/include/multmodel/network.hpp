#pragma once

#include <vector>

#include "multmodel/model.hpp"
#include "multmodel/types.hpp"

namespace multmodel {

/// A variable roster with a list of factors. The encoded distribution is
/// proportional to the pointwise product of the factors.
struct Network {
  DomainTable domains;
  std::vector<MultiplicativeModel> factors;

  bool operator==(const Network&) const = default;
};

}  // namespace multmodel
