#pragma once

#include <Eigen/Dense>
#include <vector>

#include "uwnav/harness/config.hpp"

namespace uwnav::harness {

/// Column names of the reported error states.
const std::vector<std::string>& state_names();

/// Ensemble RMSE per time step and state from per-trial error matrices (steps x states).
/// Printed mode averages |e| over trials; conventional mode is sqrt(mean e^2).
/// Throws MismatchedLengths on inconsistent shapes.
Eigen::MatrixXd rmse(const std::vector<Eigen::MatrixXd>& errors, RmseMode mode);

/// Time average of the RMSE rows in [first, last) (whole series by default).
Eigen::VectorXd armse(const Eigen::MatrixXd& rmse_series, Eigen::Index first = 0,
                      Eigen::Index last = -1);

}  // namespace uwnav::harness
