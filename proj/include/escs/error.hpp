#pragma once

#include <stdexcept>

namespace escs {

/// Raised for invalid input (malformed files, violated invariants, bad configuration).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace escs
