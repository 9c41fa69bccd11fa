#pragma once
#include <stdexcept>
#include <string>

namespace qd {

// Bad user input: malformed files, dimension mismatches, out-of-range charges.
// Mapped to exit code 2 by the CLI.
struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// Problem instance exceeds a hard size guard (exact enumeration would blow up).
// Mapped to exit code 3 by the CLI.
struct size_error : std::runtime_error {
    explicit size_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qd
