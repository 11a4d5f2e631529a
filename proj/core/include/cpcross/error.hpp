#pragma once

#include <stdexcept>
#include <string>

namespace cpcross {

// Base of every error the library throws. Mathematical negative results are
// returned as report values instead.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed documents, unknown names, bad numeric literals.
class InputError : public Error {
public:
    using Error::Error;
};

// An operation was called outside its domain (shift of a vertex path, alpha on
// a graph with an infinite emitter, mismatched graphs).
class PreconditionError : public Error {
public:
    using Error::Error;
};

// Two independent computations of the same quantity disagree.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

}  // namespace cpcross
