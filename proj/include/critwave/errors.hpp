#pragma once

#include <stdexcept>
#include <string>

namespace critwave {

/// A numerical procedure failed (divergence, NaN, stagnation).  Distinct
/// from contract violations so callers can map it to a separate exit code.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace critwave
