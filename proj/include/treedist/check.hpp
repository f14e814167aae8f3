#pragma once

#include <stdexcept>
#include <string>

namespace treedist {

/// A structural guarantee of the algorithms failed to hold at runtime.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace treedist

// Active in all build types.
#define TREEDIST_CHECK(cond, msg)                                                  \
    do {                                                                           \
        if (!(cond))                                                               \
            throw ::treedist::InternalError(std::string("internal check failed: ") + (msg)); \
    } while (0)
