#pragma once

#include <stdexcept>

namespace gronwall {

// Internal numeric failure: a solver or verification step produced a state
// the underlying theory rules out (e.g. an empty interval where a nonempty
// one is guaranteed). Distinct from domain/range errors caused by bad input.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace gronwall
