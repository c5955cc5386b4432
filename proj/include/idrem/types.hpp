#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace idrem {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

// Bad argument outside the domain of an operation (time outside horizon, window outside trace).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed or inconsistent user configuration. Maps to exit code 2 in the CLI.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// NaN/Inf or a broken numerical invariant detected at runtime.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller broke a precondition of a stateful operation.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace idrem
