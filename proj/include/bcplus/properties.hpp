#pragma once

#include <optional>
#include <string>

#include "bcplus/normalize.hpp"

namespace bcplus {

// Model checks applied to any trajectory a solver returns. Each reports the
// first problem found, or nullopt. They read the ground laws directly.

// Every non-default law holds at every step it applies to.
std::optional<std::string> check_constraints(const GroundProgram& g, const Trajectory& t);
// Every change of an inertial fluent is backed by a law whose body holds, and
// an attribute is `none` exactly when its action does not occur.
std::optional<std::string> check_completion(const GroundProgram& g, const Trajectory& t);
// Additive fluents change by exactly the sum of firing contributions; additive
// actions equal that sum.
std::optional<std::string> check_additive(const GroundProgram& g, const Trajectory& t);

}  // namespace bcplus
