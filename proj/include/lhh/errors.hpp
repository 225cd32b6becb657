#pragma once

#include <stdexcept>
#include <string>

namespace lhh {

/// A divergent integral. Divergence is a reportable outcome, not a crash:
/// callers that can represent +inf catch or avoid this, callers that need a
/// finite value let it propagate.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& what, int sign_)
        : std::runtime_error(what), sign(sign_) {}
    int sign;  // +1 diverges to +inf, -1 to -inf
};

}  // namespace lhh
