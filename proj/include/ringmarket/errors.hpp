#pragma once

#include <stdexcept>
#include <string>

namespace ringmarket {

/// Malformed or invariant-violating configuration input.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Equilibrium computation failed (no equilibrium found, work budget
/// exhausted, or a subgame propagated an error).
struct solver_error : std::runtime_error {
    explicit solver_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ringmarket
