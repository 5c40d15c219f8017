#include "uwnav/harness/metrics.hpp"

#include <cmath>

#include "uwnav/error.hpp"

namespace uwnav::harness {

const std::vector<std::string>& state_names() {
  static const std::vector<std::string> names = {"north", "east", "down", "vN",  "vE",
                                                 "vD",    "roll", "pitch", "yaw"};
  return names;
}

Eigen::MatrixXd rmse(const std::vector<Eigen::MatrixXd>& errors, RmseMode mode) {
  if (errors.empty()) throw NavError(ErrorCode::MismatchedLengths, "empty ensemble");
  const Eigen::Index rows = errors.front().rows();
  const Eigen::Index cols = errors.front().cols();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(rows, cols);
  for (const auto& e : errors) {
    if (e.rows() != rows || e.cols() != cols) {
      throw NavError(ErrorCode::MismatchedLengths, "ensemble members differ in shape");
    }
    if (mode == RmseMode::Printed) {
      acc += e.cwiseAbs();
    } else {
      acc += e.cwiseAbs2();
    }
  }
  acc /= static_cast<double>(errors.size());
  if (mode == RmseMode::Conventional) acc = acc.cwiseSqrt();
  return acc;
}

Eigen::VectorXd armse(const Eigen::MatrixXd& rmse_series, Eigen::Index first, Eigen::Index last) {
  if (last < 0) last = rmse_series.rows();
  if (first < 0 || last > rmse_series.rows() || first >= last) {
    throw NavError(ErrorCode::MismatchedLengths, "invalid averaging window");
  }
  return rmse_series.middleRows(first, last - first).colwise().mean().transpose();
}

}  // namespace uwnav::harness
