#pragma once

#include <stdexcept>
#include <string>

namespace cscale {

// Bad input: malformed graphs, infeasible parameters, violated preconditions.
// The CLI maps this family to exit code 1.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Solver or integrator failure. The CLI maps this family to exit code 2.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DisconnectedGraph : public ValidationError {
public:
    DisconnectedGraph() : ValidationError("graph is disconnected") {}
    explicit DisconnectedGraph(const std::string& what) : ValidationError(what) {}
};

class InvalidPartition : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// Raised when the closed neighborhood of the seed set covers every vertex.
class EmptyX3 : public InvalidPartition {
public:
    EmptyX3() : InvalidPartition("no vertices remain outside the seed set and its boundary") {}
};

class RetryExhausted : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class UnstableSystem : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace cscale
