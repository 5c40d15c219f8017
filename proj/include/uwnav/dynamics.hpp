#pragma once

#include <Eigen/Dense>
#include <random>
#include <string>
#include <vector>

#include "uwnav/geodesy.hpp"

namespace uwnav {

inline constexpr int kStateDim = 9;
using StateVector = Eigen::Matrix<double, kStateDim, 1>;

/// Index of each component in the 9-element navigation state vector.
enum StateIndex : int {
  kLat = 0, kLon, kDepth, kVelN, kVelE, kVelD, kRoll, kPitch, kYaw,
};

struct NavState {
  GeodeticPosition pos;
  Eigen::Vector3d vel_ned = Eigen::Vector3d::Zero();
  Attitude att;

  StateVector to_vector() const;
  static NavState from_vector(const Eigen::Ref<const Eigen::VectorXd>& x);
};

struct ImuSample {
  Eigen::Vector3d specific_force = Eigen::Vector3d::Zero();  ///< f^b, m/s^2
  Eigen::Vector3d body_rate = Eigen::Vector3d::Zero();       ///< omega_ib^b, rad/s
  double t = 0.0;  ///< start of the interval the sample covers
};

/// One manoeuvre of the schedule. accel_ned is the NED specific force f^n.
struct ScenarioStage {
  double t_start = 0.0;
  double t_end = 0.0;
  Eigen::Vector3d accel_ned = Eigen::Vector3d::Zero();
  Eigen::Vector3d euler_rates = Eigen::Vector3d::Zero();  ///< (roll, pitch, yaw) rad/s
  std::string label;
};

struct TruthSample {
  double t = 0.0;
  NavState state;
};

struct ImuNoise {
  double accel_std = 0.0;  ///< per axis, per output sample
  double gyro_std = 0.0;
};

/// Continuous mechanization: position, velocity and Euler-angle rates.
/// Throws GimbalLock when pitch exceeds the guard and Singular if the Euler-rate
/// matrix cannot be inverted.
StateVector nav_derivative(const StateVector& x, const Eigen::Vector3d& f_b,
                           const Eigen::Vector3d& w_ib_b, const EarthModel& earth);

/// One RK4 step with the IMU sample held over dt. Angles are left unwrapped so that
/// sample points straddling +-pi stay continuous; callers wrap the mean.
StateVector integrate_step(const StateVector& x, const ImuSample& imu, double dt,
                           const EarthModel& earth);

/// integrate_step followed by angle wrapping.
NavState propagate(const NavState& x, const ImuSample& imu, double dt, const EarthModel& earth);

/// Throws ScheduleGap if stages are not contiguous from t=0 or have non-positive length.
void validate_schedule(const std::vector<ScenarioStage>& stages);

/// Stage active over [t, t+eps). Returns the last stage at or after its end.
const ScenarioStage& stage_at(const std::vector<ScenarioStage>& stages, double t);

/// Truth trajectory sampled every dt_truth from 0 to the end of the schedule.
/// Velocity follows the NED specific force plus gravity and Coriolis; attitude
/// follows the stage Euler rates directly.
std::vector<TruthSample> generate_truth(const std::vector<ScenarioStage>& stages,
                                        const NavState& x0, double dt_truth,
                                        const EarthModel& earth);

/// IMU samples over consecutive intervals of length output_dt (a multiple of the
/// truth spacing). Each sample is the interval average of the ideal specific force
/// and body rate, evaluated with Simpson's rule per truth sub-interval, plus
/// independent Gaussian noise.
std::vector<ImuSample> synthesize_imu(const std::vector<TruthSample>& truth,
                                      const std::vector<ScenarioStage>& stages,
                                      const ImuNoise& noise, std::mt19937_64& rng,
                                      double output_dt, const EarthModel& earth);

/// Ideal IMU output for a truth state flying the given stage.
ImuSample ideal_imu(const NavState& x, const ScenarioStage& stage, const EarthModel& earth);

/// Default per-step (1 s) discrete process noise covariance diagonal.
Eigen::Matrix<double, kStateDim, 1> default_process_noise_diag(const EarthModel& earth,
                                                               double dt = 1.0);

/// Default IMU noise for samples of length dt: 5e-5 g accelerometer white noise and a
/// 0.02 deg/sqrt(hr) angle random walk.
ImuNoise default_imu_noise(const EarthModel& earth, double dt = 1.0);

/// Initial true state of the reference scenario: 18.946 N, 72.854 E, 50 m deep, at rest.
NavState reference_initial_state();

}  // namespace uwnav
