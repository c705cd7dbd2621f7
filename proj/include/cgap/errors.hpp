#pragma once

#include <stdexcept>
#include <string>

namespace cgap {

// Invalid run parameters (bad prime, epsilon, degree bound...). CLI exit 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// An operation was called outside its contract (ring mismatch, degree
// mismatch, non-homogeneous input...). CLI exit 3.
class ContractError : public std::logic_error {
public:
    explicit ContractError(const std::string& what) : std::logic_error(what) {}
};

// A construction-time invariant or cross-check failed. Indicates a bug,
// never a failed mathematical claim. CLI exit 3.
class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

} // namespace cgap
