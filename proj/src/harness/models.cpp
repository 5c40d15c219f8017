#include "uwnav/harness/models.hpp"

namespace uwnav::harness {

const std::vector<int>& state_angular_indices() {
  static const std::vector<int> idx = {kLon, kRoll, kYaw};
  return idx;
}

std::vector<int> measurement_angular_indices(MeasurementKind kind) {
  if (kind == MeasurementKind::ModelI) return {kMeasRoll, kMeasYaw};
  return {kMeasRoll, kMeasYaw, kMeasLon};
}

ProcessModel make_process_model(const ImuSample& imu, double dt,
                                 const Eigen::Matrix<double, kStateDim, 1>& q_diag,
                                 const EarthModel& earth) {
  ProcessModel pm;
  pm.f = [imu, dt, earth](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return integrate_step(x, imu, dt, earth);
  };
  pm.sqrt_q = q_diag.cwiseSqrt().asDiagonal();
  pm.angular = state_angular_indices();
  return pm;
}

MeasurementModel make_measurement_model(MeasurementKind kind, const MeasurementNoise& noise) {
  MeasurementModel mm;
  mm.h = [kind](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return measure(NavState::from_vector(x), kind);
  };
  mm.r_diag = noise.equivalent_variances(kind);
  mm.angular = measurement_angular_indices(kind);
  mm.state_angular = state_angular_indices();
  return mm;
}

}  // namespace uwnav::harness
