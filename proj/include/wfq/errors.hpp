#pragma once

#include <stdexcept>

namespace wfq {

// Guard violations (state-space or grid explosions, refused regimes) —
// distinct from std::invalid_argument config errors so the CLI can map them
// to their own exit code.
class GuardError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace wfq
