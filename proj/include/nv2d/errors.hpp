#pragma once

#include <stdexcept>
#include <string>

namespace nv2d {

// Bad run configuration (CFL, causality, missing keys). Maps to exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Distribution support reached the momentum-grid guard region.
struct SupportOverflowError : std::runtime_error {
    explicit SupportOverflowError(const std::string& what) : std::runtime_error(what) {}
};

// A cone integral needed history levels that were never stored.
struct InsufficientHistoryError : std::runtime_error {
    explicit InsufficientHistoryError(const std::string& what) : std::runtime_error(what) {}
};

// A characteristic left the sampler's domain; carries the exit state in the message.
struct OutOfDomainError : std::runtime_error {
    explicit OutOfDomainError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace nv2d
