#pragma once

#include <stdexcept>
#include <string>

namespace powheat {

/// Thrown when an evaluation point leaves the domain of a solution or flow.
/// `bound` names which restriction was violated.
class DomainError : public std::domain_error {
public:
    enum class Bound { TMin, TMax, XMin, XMax, Reach, XiMin };

    DomainError(Bound bound, const std::string& what)
        : std::domain_error(what), bound_(bound) {}

    Bound bound() const noexcept { return bound_; }

private:
    Bound bound_;
};

/// Thrown when two objects carry different power-law parameters.
class ParameterMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace powheat
