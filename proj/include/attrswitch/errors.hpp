#pragma once

#include <stdexcept>
#include <string>

#include "attrswitch/vec2.hpp"

namespace attrswitch {

/// Invalid configuration: bad parameter values, incompatible channel/system
/// pairs, malformed scenario files. Maps to exit status 2 in the CLI.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Parameter outside its mathematical domain (e.g. nonpositive mass).
class DomainError : public ConfigError {
public:
    explicit DomainError(const std::string& what) : ConfigError(what) {}
};

/// Numerical failure during time integration. Carries the last valid state
/// so callers can report where the run died. Maps to exit status 3.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double tau, Vec2 last_state)
        : std::runtime_error(what), tau(tau), last_state(last_state) {}

    double tau;
    Vec2 last_state;
};

/// Impact-surface bisection failed to converge. Should be unreachable with a
/// sane step size; treated as a test failure when it happens.
class EventLocalizationError : public IntegrationError {
public:
    using IntegrationError::IntegrationError;
};

/// Newton iteration for a periodic orbit did not converge.
class NoOrbitError : public std::runtime_error {
public:
    explicit NoOrbitError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace attrswitch
