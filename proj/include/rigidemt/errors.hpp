#pragma once

#include <stdexcept>
#include <string>

namespace rigidemt {

// Bad user input: malformed files, inadmissible materials, invalid maps,
// out-of-domain arguments. The CLI maps this to exit code 2.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical failure: singular or near-singular systems, truncation budget
// exhausted without meeting the residual tolerance. Exit code 3.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An internal cross-check (two routes to the same quantity) disagreed beyond
// tolerance. Signals a bug upstream, not a usage problem. Exit code 3.
struct ConsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace rigidemt
