#pragma once

#include <stdexcept>

namespace gpk {

// Raised when an iterative numerical routine fails to reach its tolerance
// within its resource cap (panel limit, refinement depth, grid ceiling).
struct NonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace gpk
