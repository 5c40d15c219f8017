#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "uwnav/dynamics.hpp"
#include "uwnav/error.hpp"
#include "uwnav/scenario.hpp"

using namespace uwnav;

namespace {

const EarthModel kEarth = EarthModel::wgs84();

NavState hover_state() {
  NavState x;
  x.pos = {deg2rad(18.946), deg2rad(72.854), 50.0};
  return x;
}

ImuSample hover_imu(const NavState& x) {
  ImuSample s;
  s.specific_force = {0.0, 0.0, -kEarth.gravity};
  s.body_rate = dcm_body_to_nav(x.att).transpose() * earth_rate_nav(x.pos.lat, kEarth);
  return s;
}

Eigen::Vector3d ned_offset(const NavState& a, const NavState& b) {
  return geodetic_to_ned(a.pos, b.pos, kEarth);
}

}  // namespace

TEST(Dynamics, HoverIsStationary) {
  const NavState x = hover_state();
  const ImuSample u = hover_imu(x);
  const StateVector d = nav_derivative(x.to_vector(), u.specific_force, u.body_rate, kEarth);
  EXPECT_LT(d.cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Dynamics, ZeroVelocityGivesZeroPositionRate) {
  NavState x = hover_state();
  x.att = {0.1, -0.2, 0.3};
  const StateVector d = nav_derivative(x.to_vector(), {0.3, 0.1, -9.0}, {0.01, 0.02, 0.03}, kEarth);
  EXPECT_EQ(d.head<3>(), Eigen::Vector3d::Zero());
}

TEST(Dynamics, DepthRateIsMinusDownVelocity) {
  NavState x = hover_state();
  x.vel_ned = {0.0, 0.0, 1.5};
  const StateVector d = nav_derivative(x.to_vector(), {0, 0, -kEarth.gravity}, {0, 0, 0}, kEarth);
  EXPECT_DOUBLE_EQ(d(kDepth), -1.5);
}

TEST(Dynamics, CoriolisOnEastVelocity) {
  NavState x = hover_state();
  x.vel_ned = {0.0, 5.144, 0.0};
  const StateVector d = nav_derivative(x.to_vector(), {0, 0, -kEarth.gravity}, {0, 0, 0}, kEarth);
  const double lat = x.pos.lat, w = kEarth.omega_earth;
  const auto r = curvature_radii(lat, kEarth);
  const double rn = r.transverse + x.pos.depth;
  const double ve = 5.144;
  const Eigen::Vector3d omega(2 * w * std::cos(lat) + ve / rn, 0.0,
                              -2 * w * std::sin(lat) - ve * std::tan(lat) / rn);
  // -(omega x v) with v = (0, ve, 0)
  const Eigen::Vector3d expected(omega.z() * ve, 0.0, -omega.x() * ve);
  EXPECT_NEAR(d(kVelN), expected.x(), 1e-15);
  EXPECT_NEAR(d(kVelE), expected.y(), 1e-15);
  EXPECT_NEAR(d(kVelD), expected.z(), 1e-15);
}

TEST(Dynamics, GimbalLockRejected) {
  NavState x = hover_state();
  x.att.pitch = deg2rad(86.0);
  try {
    nav_derivative(x.to_vector(), {0, 0, 0}, {0, 0, 0}, kEarth);
    FAIL();
  } catch (const NavError& e) {
    EXPECT_EQ(e.code(), ErrorCode::GimbalLock);
  }
}

TEST(Dynamics, PropagateHoverFixedPoint) {
  const NavState x = hover_state();
  const NavState y = propagate(x, hover_imu(x), 1.0, kEarth);
  EXPECT_LT(std::abs(y.pos.lat - x.pos.lat), 1e-9);
  EXPECT_LT(std::abs(y.pos.lon - x.pos.lon), 1e-9);
  EXPECT_LT(std::abs(y.pos.depth - x.pos.depth), 1e-9);
}

TEST(Dynamics, PropagateEastVelocityLongitudeStep) {
  NavState x = hover_state();
  x.vel_ned = {0.0, 5.144, 0.0};
  const NavState y = propagate(x, hover_imu(x), 1.0, kEarth);
  const auto r = curvature_radii(x.pos.lat, kEarth);
  const double dl = 5.144 / ((r.transverse + x.pos.depth) * std::cos(x.pos.lat));
  EXPECT_NEAR(y.pos.lon - x.pos.lon, dl, 1e-6 * dl);
}

TEST(Dynamics, Rk4FourthOrderConvergence) {
  NavState x = hover_state();
  x.vel_ned = {3.0, 4.0, 0.5};
  x.att = {0.1, 0.2, 0.3};
  ImuSample u;
  u.specific_force = {0.5, -0.3, -9.5};
  u.body_rate = {0.05, -0.04, 0.08};
  const auto run = [&](double dt) {
    StateVector s = x.to_vector();
    const int n = static_cast<int>(std::llround(20.0 / dt));
    for (int i = 0; i < n; ++i) s = integrate_step(s, u, dt, kEarth);
    return s;
  };
  const StateVector ref = run(20.0 / 512);
  const double e1 = (run(2.0) - ref).tail<6>().cwiseAbs().maxCoeff();
  const double e2 = (run(1.0) - ref).tail<6>().cwiseAbs().maxCoeff();
  EXPECT_GT(e1 / e2, 12.0);
  EXPECT_LT(e1 / e2, 20.0);
}

TEST(Dynamics, PropagateIsDeterministic) {
  NavState x = hover_state();
  x.vel_ned = {1.0, 2.0, 0.1};
  x.att = {0.01, 0.02, 3.1};
  ImuSample u;
  u.specific_force = {0.1, 0.2, -9.7};
  u.body_rate = {0.001, 0.002, 0.05};
  const StateVector a = propagate(x, u, 1.0, kEarth).to_vector();
  const StateVector b = propagate(x, u, 1.0, kEarth).to_vector();
  EXPECT_EQ(a, b);
  EXPECT_LE(std::abs(propagate(x, u, 1.0, kEarth).att.yaw), kPi);
}

TEST(Dynamics, CoriolisBoundsSpeedChange) {
  NavState x = hover_state();
  x.vel_ned = {3.0, 4.0, 0.0};
  ImuSample u = hover_imu(x);
  const double dt = 1.0;
  for (int i = 0; i < 50; ++i) {
    const NavState y = propagate(x, u, dt, kEarth);
    const Eigen::Vector3d w = 2.0 * earth_rate_nav(x.pos.lat, kEarth) +
                              transport_rate(x.pos, x.vel_ned, kEarth);
    const double bound = w.norm() * x.vel_ned.norm() * dt;
    EXPECT_LE(std::abs(y.vel_ned.norm() - x.vel_ned.norm()), bound * 1.01);
    x = y;
    u = hover_imu(x);
  }
}

TEST(Dynamics, ScheduleGapDetected) {
  auto stages = reference_scenario(kEarth.gravity);
  stages[3].t_start += 1.0;
  try {
    validate_schedule(stages);
    FAIL();
  } catch (const NavError& e) {
    EXPECT_EQ(e.code(), ErrorCode::ScheduleGap);
  }
}

class TruthFixture : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    stages_ = reference_scenario(kEarth.gravity);
    truth_ = generate_truth(stages_, reference_initial_state(), 0.01, kEarth);
  }
  static const NavState& at(double t) {
    return truth_[static_cast<std::size_t>(std::llround(t / 0.01))].state;
  }
  static std::vector<ScenarioStage> stages_;
  static std::vector<TruthSample> truth_;
};

std::vector<ScenarioStage> TruthFixture::stages_;
std::vector<TruthSample> TruthFixture::truth_;

TEST_F(TruthFixture, SpansSchedule) {
  ASSERT_EQ(truth_.size(), 90001u);
  EXPECT_NEAR(truth_.back().t, 900.0, 1e-9);
}

TEST_F(TruthFixture, StageOneReachesTenKnots) {
  const double ve = at(100.0).vel_ned.y();
  EXPECT_NEAR(ve, 5.0, 0.03 * 5.0);
  EXPECT_NEAR(ve, 10.0 * 0.5144, 0.03 * 5.144);
}

TEST_F(TruthFixture, UniformMotionStageKeepsVelocity) {
  EarthModel still = kEarth;
  still.omega_earth = 0.0;
  const auto t0 = generate_truth(stages_, reference_initial_state(), 0.01, still);
  EXPECT_LT((t0[20000].state.vel_ned - t0[15000].state.vel_ned).norm(), 0.02);
}

TEST_F(TruthFixture, UniformMotionStageChangeIsCoriolisOnly) {
  double bound = 0.0;
  for (int k = 15000; k < 20000; ++k) {
    const NavState& x = truth_[k].state;
    const Eigen::Vector3d w = 2.0 * earth_rate_nav(x.pos.lat, kEarth) +
                              transport_rate(x.pos, x.vel_ned, kEarth);
    bound += w.norm() * x.vel_ned.norm() * 0.01;
  }
  const double dv = (at(200.0).vel_ned - at(150.0).vel_ned).norm();
  EXPECT_LE(dv, bound);
  EXPECT_GT(dv, 0.5 * bound);
}

TEST_F(TruthFixture, TurnRightChangesHeading) {
  const double dpsi = rad2deg(wrap_angle(at(450.0).att.yaw - at(355.0).att.yaw));
  EXPECT_NEAR(dpsi, 90.25, 1e-6);
}

TEST_F(TruthFixture, NoiseFreeImuReproducesTruth) {
  std::mt19937_64 rng(1);
  const auto imu = synthesize_imu(truth_, stages_, ImuNoise{}, rng, 0.01, kEarth);
  ASSERT_EQ(imu.size(), truth_.size() - 1);
  NavState x = truth_.front().state;
  double worst = 0.0;
  for (std::size_t k = 0; k < imu.size(); ++k) {
    x = propagate(x, imu[k], 0.01, kEarth);
    if ((k + 1) % 1000 == 0) worst = std::max(worst, ned_offset(x, truth_[k + 1].state).norm());
  }
  worst = std::max(worst, ned_offset(x, truth_.back().state).norm());
  EXPECT_LT(worst, 1e-3);
}

TEST_F(TruthFixture, OneHertzImuStaysCloseToTruth) {
  std::mt19937_64 rng(1);
  const auto imu = synthesize_imu(truth_, stages_, ImuNoise{}, rng, 1.0, kEarth);
  ASSERT_EQ(imu.size(), 900u);
  NavState x = truth_.front().state;
  for (std::size_t k = 0; k < imu.size(); ++k) x = propagate(x, imu[k], 1.0, kEarth);
  EXPECT_LT(ned_offset(x, truth_.back().state).norm(), 5.0);
}

TEST_F(TruthFixture, HoverImuIsGravityPlusNoise) {
  std::mt19937_64 rng(3);
  const auto imu = synthesize_imu(truth_, stages_, ImuNoise{1e-3, 1e-5}, rng, 1.0, kEarth);
  // t in [0,1]: level attitude, almost at rest, aE = 0.05
  EXPECT_NEAR(imu[0].specific_force.z(), -kEarth.gravity, 5e-3);
  EXPECT_NEAR(imu[0].specific_force.y(), 0.05, 5e-3);
}

TEST_F(TruthFixture, PitchRateAppearsOnBodyY) {
  EarthModel still = kEarth;
  still.omega_earth = 0.0;
  NavState x = at(100.0);
  x.vel_ned.setZero();
  const ImuSample s = ideal_imu(x, stage_at(stages_, 100.5), still);
  EXPECT_NEAR(s.body_rate.y(), deg2rad(0.4), 1e-12);
}

TEST_F(TruthFixture, TruthStepHalvingAgrees) {
  const auto half = generate_truth(stages_, reference_initial_state(), 0.005, kEarth);
  EXPECT_LT(ned_offset(half.back().state, truth_.back().state).norm(), 1e-4);
}
