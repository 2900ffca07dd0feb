#pragma once

#include <stdexcept>
#include <string>

namespace causeway {

// Base class for everything thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad arguments, violated contracts, malformed files. The CLI maps these
// to exit code 1; anything else lands on exit code 2.
class ValidationError : public Error {
public:
    using Error::Error;
};

class IndexError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// A column that cannot carry statistical information (zero variance).
class DegenerateColumnError : public ValidationError {
public:
    explicit DegenerateColumnError(const std::string& column)
        : ValidationError("degenerate column (zero variance): " + column), column_(column) {}

    const std::string& column() const { return column_; }

private:
    std::string column_;
};

class InsufficientSampleError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class KnowledgeConflictError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class ParseError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class UsageError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// Numerical failure while inverting a correlation submatrix.
class SingularityError : public Error {
public:
    using Error::Error;
};

// No acyclic, collider-preserving orientation of the undirected edges exists.
class ExtensionError : public Error {
public:
    using Error::Error;
};

class FittingError : public Error {
public:
    explicit FittingError(const std::string& node)
        : Error("rank-deficient parent matrix while fitting node: " + node), node_(node) {}

    const std::string& node() const { return node_; }

private:
    std::string node_;
};

}  // namespace causeway
