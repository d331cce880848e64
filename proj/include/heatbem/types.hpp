#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace heatbem {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Invalid input or configuration (CLI exit code 2).
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Non-convergence, breakdown or numerical singularity (CLI exit code 3).
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace heatbem
