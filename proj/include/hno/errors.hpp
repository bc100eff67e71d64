#pragma once

#include <stdexcept>
#include <string>

namespace hno {

// Malformed or truncated on-disk data (bad magic, version, short read).
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure at runtime: divergence, CFL violation, solver breakdown,
// degenerate samples.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Bad experiment configuration: unknown key, missing key, unparsable value.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hno
