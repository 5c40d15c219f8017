#include "uwnav/dynamics.hpp"

#include <cmath>

#include "uwnav/error.hpp"

namespace uwnav {

StateVector NavState::to_vector() const {
  StateVector x;
  x << pos.lat, pos.lon, pos.depth, vel_ned, att.roll, att.pitch, att.yaw;
  return x;
}

NavState NavState::from_vector(const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != kStateDim) {
    throw NavError(ErrorCode::InvalidArgument, "navigation state must have 9 components");
  }
  NavState s;
  s.pos = {x(kLat), x(kLon), x(kDepth)};
  s.vel_ned = x.segment<3>(kVelN);
  s.att = {x(kRoll), x(kPitch), x(kYaw)};
  return s;
}

namespace {

Eigen::Matrix3d skew(const Eigen::Vector3d& w) {
  Eigen::Matrix3d m;
  m << 0.0, -w.z(), w.y(),
       w.z(), 0.0, -w.x(),
       -w.y(), w.x(), 0.0;
  return m;
}

Eigen::Vector3d position_rate(const GeodeticPosition& pos, const Eigen::Vector3d& v,
                              const EarthModel& earth) {
  const auto r = curvature_radii(pos.lat, earth);
  return {v.x() / (r.meridian + pos.depth),
          v.y() / ((r.transverse + pos.depth) * std::cos(pos.lat)),
          -v.z()};
}

Eigen::Vector3d coriolis(const GeodeticPosition& pos, const Eigen::Vector3d& v,
                         const EarthModel& earth) {
  const Eigen::Vector3d w = 2.0 * earth_rate_nav(pos.lat, earth) + transport_rate(pos, v, earth);
  return skew(w) * v;
}

Eigen::Matrix3d inverse_euler_rate_matrix(const Attitude& att) {
  const double cp = std::cos(att.pitch);
  if (std::abs(cp) < 1e-12) throw NavError(ErrorCode::Singular, "Euler-rate matrix is singular");
  const double cr = std::cos(att.roll), sr = std::sin(att.roll);
  const double tp = std::tan(att.pitch);
  Eigen::Matrix3d m;
  m << 1.0, sr * tp, cr * tp,
       0.0, cr, -sr,
       0.0, sr / cp, cr / cp;
  return m;
}

StateVector rk4(const StateVector& x, double dt, const auto& deriv) {
  const StateVector k1 = deriv(x);
  const StateVector k2 = deriv(x + 0.5 * dt * k1);
  const StateVector k3 = deriv(x + 0.5 * dt * k2);
  const StateVector k4 = deriv(x + dt * k3);
  return x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

NavState wrapped(const StateVector& x) {
  NavState s = NavState::from_vector(x);
  s.pos.lon = wrap_angle(s.pos.lon);
  s.att.roll = wrap_angle(s.att.roll);
  s.att.yaw = wrap_angle(s.att.yaw);
  return s;
}

}  // namespace

StateVector nav_derivative(const StateVector& x, const Eigen::Vector3d& f_b,
                           const Eigen::Vector3d& w_ib_b, const EarthModel& earth) {
  const NavState s = NavState::from_vector(x);
  check_attitude(s.att);
  const Eigen::Matrix3d c = dcm_body_to_nav(s.att);
  const Eigen::Vector3d gravity(0.0, 0.0, earth.gravity);
  const Eigen::Vector3d w_in = earth_rate_nav(s.pos.lat, earth) +
                               transport_rate(s.pos, s.vel_ned, earth);

  StateVector dx;
  dx.segment<3>(kLat) = position_rate(s.pos, s.vel_ned, earth);
  dx.segment<3>(kVelN) = c * f_b + gravity - coriolis(s.pos, s.vel_ned, earth);
  dx.segment<3>(kRoll) = inverse_euler_rate_matrix(s.att) * (w_ib_b - c.transpose() * w_in);
  return dx;
}

StateVector integrate_step(const StateVector& x, const ImuSample& imu, double dt,
                           const EarthModel& earth) {
  if (!(dt > 0.0)) throw NavError(ErrorCode::InvalidArgument, "dt must be positive");
  return rk4(x, dt, [&](const StateVector& s) {
    return nav_derivative(s, imu.specific_force, imu.body_rate, earth);
  });
}

NavState propagate(const NavState& x, const ImuSample& imu, double dt, const EarthModel& earth) {
  return wrapped(integrate_step(x.to_vector(), imu, dt, earth));
}

void validate_schedule(const std::vector<ScenarioStage>& stages) {
  if (stages.empty()) throw NavError(ErrorCode::ScheduleGap, "empty schedule");
  double expected = 0.0;
  for (std::size_t i = 0; i < stages.size(); ++i) {
    const auto& s = stages[i];
    if (std::abs(s.t_start - expected) > 1e-9) {
      throw NavError(ErrorCode::ScheduleGap, "stage " + std::to_string(i + 1) + " starts at " +
                                                 std::to_string(s.t_start) + ", expected " +
                                                 std::to_string(expected));
    }
    if (!(s.t_end > s.t_start)) {
      throw NavError(ErrorCode::ScheduleGap,
                     "stage " + std::to_string(i + 1) + " has non-positive duration");
    }
    expected = s.t_end;
  }
}

const ScenarioStage& stage_at(const std::vector<ScenarioStage>& stages, double t) {
  for (const auto& s : stages) {
    if (t < s.t_end - 1e-9) return s;
  }
  return stages.back();
}

std::vector<TruthSample> generate_truth(const std::vector<ScenarioStage>& stages,
                                        const NavState& x0, double dt_truth,
                                        const EarthModel& earth) {
  validate_schedule(stages);
  const double per_second = 1.0 / dt_truth;
  if (!(dt_truth > 0.0) || std::abs(per_second - std::round(per_second)) > 1e-9) {
    throw NavError(ErrorCode::InvalidArgument, "dt_truth must divide 1 s");
  }
  const auto steps = static_cast<long>(std::llround(stages.back().t_end / dt_truth));
  const Eigen::Vector3d gravity(0.0, 0.0, earth.gravity);

  std::vector<TruthSample> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  StateVector x = x0.to_vector();
  out.push_back({0.0, wrapped(x)});
  for (long i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) * dt_truth;
    const ScenarioStage& stage = stage_at(stages, t + 0.5 * dt_truth);
    x = rk4(x, dt_truth, [&](const StateVector& s) {
      const NavState n = NavState::from_vector(s);
      StateVector dx;
      dx.segment<3>(kLat) = position_rate(n.pos, n.vel_ned, earth);
      dx.segment<3>(kVelN) = stage.accel_ned + gravity - coriolis(n.pos, n.vel_ned, earth);
      dx.segment<3>(kRoll) = stage.euler_rates;
      return dx;
    });
    out.push_back({static_cast<double>(i + 1) * dt_truth, wrapped(x)});
  }
  return out;
}

ImuSample ideal_imu(const NavState& x, const ScenarioStage& stage, const EarthModel& earth) {
  const Eigen::Matrix3d c = dcm_body_to_nav(x.att);
  const Eigen::Vector3d w_in = earth_rate_nav(x.pos.lat, earth) +
                               transport_rate(x.pos, x.vel_ned, earth);
  ImuSample s;
  s.specific_force = c.transpose() * stage.accel_ned;
  s.body_rate = euler_rate_matrix(x.att) * stage.euler_rates + c.transpose() * w_in;
  return s;
}

std::vector<ImuSample> synthesize_imu(const std::vector<TruthSample>& truth,
                                      const std::vector<ScenarioStage>& stages,
                                      const ImuNoise& noise, std::mt19937_64& rng,
                                      double output_dt, const EarthModel& earth) {
  if (truth.size() < 2) throw NavError(ErrorCode::InvalidArgument, "truth series too short");
  const double dt = truth[1].t - truth[0].t;
  const double ratio_f = output_dt / dt;
  const auto ratio = static_cast<std::size_t>(std::llround(ratio_f));
  if (ratio == 0 || std::abs(ratio_f - static_cast<double>(ratio)) > 1e-6) {
    throw NavError(ErrorCode::InvalidArgument, "IMU interval must be a multiple of truth spacing");
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::size_t count = (truth.size() - 1) / ratio;
  std::vector<ImuSample> out;
  out.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    ImuSample acc;
    acc.t = truth[j * ratio].t;
    for (std::size_t i = j * ratio; i < (j + 1) * ratio; ++i) {
      const NavState& a = truth[i].state;
      const NavState& b = truth[i + 1].state;
      const ScenarioStage& stage = stage_at(stages, truth[i].t + 0.5 * dt);
      // Mid-interval state: attitude advances linearly at the stage rates.
      NavState mid;
      mid.pos = {0.5 * (a.pos.lat + b.pos.lat), a.pos.lon + 0.5 * wrap_angle(b.pos.lon - a.pos.lon),
                 0.5 * (a.pos.depth + b.pos.depth)};
      mid.vel_ned = 0.5 * (a.vel_ned + b.vel_ned);
      mid.att = {a.att.roll + 0.5 * dt * stage.euler_rates.x(),
                 a.att.pitch + 0.5 * dt * stage.euler_rates.y(),
                 a.att.yaw + 0.5 * dt * stage.euler_rates.z()};
      NavState end = b;
      end.att = {a.att.roll + dt * stage.euler_rates.x(), a.att.pitch + dt * stage.euler_rates.y(),
                 a.att.yaw + dt * stage.euler_rates.z()};
      const ImuSample s0 = ideal_imu(a, stage, earth);
      const ImuSample sm = ideal_imu(mid, stage, earth);
      const ImuSample s1 = ideal_imu(end, stage, earth);
      acc.specific_force += (s0.specific_force + 4.0 * sm.specific_force + s1.specific_force) / 6.0;
      acc.body_rate += (s0.body_rate + 4.0 * sm.body_rate + s1.body_rate) / 6.0;
    }
    acc.specific_force /= static_cast<double>(ratio);
    acc.body_rate /= static_cast<double>(ratio);
    for (int k = 0; k < 3; ++k) acc.specific_force(k) += noise.accel_std * gauss(rng);
    for (int k = 0; k < 3; ++k) acc.body_rate(k) += noise.gyro_std * gauss(rng);
    out.push_back(acc);
  }
  return out;
}

Eigen::Matrix<double, kStateDim, 1> default_process_noise_diag(const EarthModel& earth,
                                                               double dt) {
  const ImuNoise n = default_imu_noise(earth, dt);
  Eigen::Matrix<double, kStateDim, 1> q;
  const double dv = n.accel_std * dt;
  const double da = n.gyro_std * dt;
  q << 0.0, 0.0, 0.0, dv * dv, dv * dv, dv * dv, da * da, da * da, da * da;
  return q;
}

ImuNoise default_imu_noise(const EarthModel& earth, double dt) {
  // 0.02 deg/sqrt(hr) angle random walk, expressed in rad/sqrt(s).
  const double arw = deg2rad(0.02) / 60.0;
  return {5e-5 * earth.gravity, arw / std::sqrt(dt)};
}

NavState reference_initial_state() {
  NavState x;
  x.pos = {deg2rad(18.946), deg2rad(72.854), 50.0};
  return x;
}

}  // namespace uwnav
