#pragma once

#include <stdexcept>
#include <string>

namespace novak {

// Mismatched vector lengths or shape/length disagreements.
class DimensionError : public std::invalid_argument {
public:
    explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

// Invalid hyperparameters or malformed run configuration.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// NaN/Inf encountered where finite values are required.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// An operation was called in a state its contract forbids.
class ContractError : public std::logic_error {
public:
    explicit ContractError(const std::string& what) : std::logic_error(what) {}
};

} // namespace novak
