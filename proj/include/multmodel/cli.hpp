#pragma once

#include <ostream>

namespace multmodel {

/// Command dispatch for the multmodel tool. Exit codes: 0 success, 1 usage,
/// 2 parse error, 3 invalid model, 4 numeric degeneracy, 5 capacity.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace multmodel
