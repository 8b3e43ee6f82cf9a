#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace irnn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Argument outside the mathematical domain of an operation (negative θ,
/// non-finite matrix entries, zero reference matrix).
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Penalty or solver parameters that violate their documented ranges.
class ParameterError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Shape mismatch, unsorted input and similar caller contract violations.
class PreconditionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Inconsistent solver configuration, e.g. a step constant not exceeding the
/// Lipschitz constant of the loss.
class ConfigurationError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// LAPACK failure (SVD did not converge).
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A guaranteed property of the iteration was observed to fail. Indicates a
/// bug or a penalty that is not concave/nondecreasing.
class ConsistencyError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

} // namespace irnn
