#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace influence_dyn {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input shape: non-square, dimension mismatch, non-finite entries.
class StructuralError : public Error {
public:
    using Error::Error;
};

// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
public:
    using Error::Error;
};

// Coefficient constraint (a_i + b_i + sum_j c_ij = 1, ranges, regime) violated.
class ConstraintError : public Error {
public:
    using Error::Error;
};

// An agent whose self-weight in W equals 1 cannot be mapped onto P.
class IsolatedAgentError : public Error {
public:
    IsolatedAgentError(std::size_t agent, const std::string& what)
        : Error(what), agent_(agent) {}
    std::size_t agent() const noexcept { return agent_; }

private:
    std::size_t agent_;
};

// Two or more fully self-weighted agents: the dominant eigenvector is not unique.
class DegeneracyError : public Error {
public:
    using Error::Error;
};

// Schedule/regime combination not admissible for the requested operation.
class RegimeError : public Error {
public:
    using Error::Error;
};

class IterationLimitError : public Error {
public:
    IterationLimitError(std::size_t iterations, double last_residual, const std::string& what)
        : Error(what), iterations_(iterations), last_residual_(last_residual) {}
    std::size_t iterations() const noexcept { return iterations_; }
    double last_residual() const noexcept { return last_residual_; }

private:
    std::size_t iterations_;
    double last_residual_;
};

class SingularMatrixError : public Error {
public:
    SingularMatrixError(std::size_t column, double pivot, const std::string& what)
        : Error(what), column_(column), pivot_(pivot) {}
    std::size_t column() const noexcept { return column_; }
    double pivot() const noexcept { return pivot_; }

private:
    std::size_t column_;
    double pivot_;
};

// Experiment configuration rejected; the message starts with the field path.
class ConfigError : public Error {
public:
    ConfigError(std::string field_path, const std::string& message)
        : Error(field_path + ": " + message), field_path_(std::move(field_path)) {}
    const std::string& field_path() const noexcept { return field_path_; }

private:
    std::string field_path_;
};

}  // namespace influence_dyn
