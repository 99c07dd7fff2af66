#pragma once

#include <stdexcept>
#include <string>

namespace rl {

// Invalid parameter values (bad scenario fields, out-of-range arguments).
struct DomainError : std::invalid_argument {
    explicit DomainError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Malformed configuration input (files, key-value pairs).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Capacity search could not establish a valid rate bracket.
struct BracketError : std::runtime_error {
    explicit BracketError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace rl
