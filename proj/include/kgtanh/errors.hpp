#ifndef KGTANH_ERRORS_HPP
#define KGTANH_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace kgtanh {

// Base class for all solver errors.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Argument outside the supported domain (z outside [0,1), r < 0, |E| <= m in a
// continuum routine, ...).
class DomainError : public Error {
  public:
    using Error::Error;
};

// A series or iteration failed to reach its tolerance within the cap.
class NonConvergence : public Error {
  public:
    using Error::Error;
};

// Lower hypergeometric parameter within tolerance of a nonpositive integer.
class DegenerateParameters : public Error {
  public:
    using Error::Error;
};

// The two interior basis solutions are (nearly) linearly dependent.
class DegenerateBasis : public Error {
  public:
    using Error::Error;
};

// kg_norm called at an energy that does not satisfy the matching condition.
class NotAnEigenvalue : public Error {
  public:
    using Error::Error;
};

// find_critical_B bracket does not contain exactly one event of the mode.
class EventNotBracketed : public Error {
  public:
    using Error::Error;
};

// A tracked root disappeared without a detected terminal event.
class BranchLost : public Error {
  public:
    using Error::Error;
};

// Complex root iteration failed to converge.
class NoConvergence : public Error {
  public:
    using Error::Error;
};

// Adaptive integrator exceeded its step budget.
class StepLimitExceeded : public Error {
  public:
    using Error::Error;
};

// Adaptive integrator step size collapsed.
class StiffnessSuspected : public Error {
  public:
    using Error::Error;
};

// Richardson pair for the time delay disagrees beyond the hard limit.
class DifferentiationUnstable : public Error {
  public:
    using Error::Error;
};

// Non-fatal diagnostics (GridTooCoarse, JumpTooLarge, ...) are delivered
// through this channel instead of exceptions.
using Warnings = std::vector<std::string>;

}  // namespace kgtanh

#endif
