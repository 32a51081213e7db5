#pragma once

#include <stdexcept>
#include <string>

namespace tsvar {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An iterative method exhausted its iteration budget.
struct NoConvergence : Error {
    int iterations;
    explicit NoConvergence(const std::string& what, int iters)
        : Error(what), iterations(iters) {}
};

}  // namespace tsvar
