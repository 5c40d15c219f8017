#pragma once

#include "uwnav/dynamics.hpp"
#include "uwnav/filters.hpp"
#include "uwnav/sensors.hpp"

namespace uwnav::harness {

/// State components wrapped to (-pi, pi]: longitude, roll, yaw.
const std::vector<int>& state_angular_indices();
/// Measurement channels wrapped for the given model.
std::vector<int> measurement_angular_indices(MeasurementKind kind);

/// Process model driven by one IMU sample held over dt.
ProcessModel make_process_model(const ImuSample& imu, double dt,
                                 const Eigen::Matrix<double, kStateDim, 1>& q_diag,
                                 const EarthModel& earth);

/// Measurement model with the equivalent variances of the configured mixtures.
MeasurementModel make_measurement_model(MeasurementKind kind, const MeasurementNoise& noise);

}  // namespace uwnav::harness
