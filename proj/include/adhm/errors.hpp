#pragma once

#include <stdexcept>
#include <string>

namespace adhm {

// Bad inputs: illegal diagram parameters, schema violations, precondition
// failures.  The CLI maps these to exit code 2.
struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failures: non-convergence, rank defects.  CLI exit code 1.
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace adhm
