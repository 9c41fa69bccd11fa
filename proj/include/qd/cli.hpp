#pragma once

namespace qd {

// Every output begins with the line "# qdtool <version>"; the remainder is
// deterministic for fixed inputs, seeds and thread settings.
inline constexpr char kToolVersion[] = "0.1.0";

// Exit codes: 0 ok, 2 invalid input or inconsistent configuration, 3 a size
// guard refused the computation, 64 command line usage error.
int run_cli(int argc, char** argv);

}  // namespace qd
