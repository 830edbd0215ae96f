#pragma once

#include <stdexcept>
#include <string>

namespace pcgbench {

/// Operand shapes disagree (matvec, solves, permutation application).
class DimensionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A triangular factor has a zero on its diagonal.
class SingularFactor : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The matrix cannot be SPD (nonpositive diagonal entry found during scaling).
class NotSpdCandidate : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The matrix fails a required diagonal-dominance precondition.
class NotSdd : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file (Matrix Market, permutation, diagonal vector, config).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Configuration value outside its documented domain.
class InvalidConfig : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace pcgbench
