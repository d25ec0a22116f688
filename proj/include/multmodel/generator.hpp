#pragma once

#include <cstdint>

#include "multmodel/network.hpp"

namespace multmodel {

/// Seeded random networks for property tests and benchmarks. All parameter
/// values are kept strictly positive so reference comparisons are
/// well-conditioned.
struct RandomNetworkParams {
  int min_vars = 4;
  int max_vars = 12;
  int max_card = 4;
  int min_factors = 3;
  int max_factors = 8;
  int max_scope = 3;
  std::uint64_t joint_cap = std::uint64_t{1} << 16;
  bool tables_only = false;
  bool binary_only = false;
};

Network random_network(std::uint64_t seed,
                       const RandomNetworkParams& params = {});

/// Two-level diagnosis network: binary diseases 0..d-1 with prior tables,
/// binary findings d..d+f-1 with noisy-OR conditionals. With `windowed` set
/// every finding takes exactly parents_min parents in a wrap-around window,
/// giving uniform parent counts for scaling measurements.
struct BipartiteNoisyOrParams {
  int diseases = 10;
  int findings = 15;
  int parents_min = 4;
  int parents_max = 8;
  bool windowed = false;
};

Network noisy_or_bipartite(std::uint64_t seed,
                           const BipartiteNoisyOrParams& params = {});

}  // namespace multmodel
