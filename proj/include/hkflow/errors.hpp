#pragma once

#include <stdexcept>
#include <string>

namespace hk {

// Parameter-domain or assumption violations (bad alpha/p, negative densities,
// inadmissible inequality combinations). Maps to CLI exit code 2.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed configuration input. Maps to CLI exit code 1.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// An inequality certificate came back infinite or above the configured cap.
// Maps to CLI exit code 3.
class FalsifiedInequality : public std::runtime_error {
public:
    explicit FalsifiedInequality(const std::string& what) : std::runtime_error(what) {}
};

// Time integration detected a non-finite monitor or lost too much mass to the
// positivity clamp. Maps to CLI exit code 4.
class SolverAbort : public std::runtime_error {
public:
    explicit SolverAbort(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hk
