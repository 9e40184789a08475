#pragma once

#include <stdexcept>
#include <string>

namespace srn {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// model
class FiringDisabledTransition : public Error { using Error::Error; };

// state space
class StateSpaceExceeded : public Error { using Error::Error; };
class VanishingLoop : public Error { using Error::Error; };
class DeadState : public Error { using Error::Error; };

// solver
class ReducibleChain : public Error { using Error::Error; };
class Singular : public Error { using Error::Error; };
class DimensionMismatch : public Error { using Error::Error; };
class UnknownReward : public Error { using Error::Error; };

// simulator
class DeadlockReached : public Error { using Error::Error; };
class BudgetExceeded : public Error { using Error::Error; };

// parameterization / metrics
class OutOfRange : public Error { using Error::Error; };
class DivisionByZero : public Error { using Error::Error; };
class DegenerateRange : public Error { using Error::Error; };

// config files
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line, int column)
        : Error(what), line_(line), column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};
class UnknownKey : public Error { using Error::Error; };
class RangeViolation : public Error { using Error::Error; };

}  // namespace srn
