#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "uwnav/error.hpp"
#include "uwnav/geodesy.hpp"

using namespace uwnav;

namespace {

const EarthModel kEarth = EarthModel::wgs84();

Attitude random_attitude(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  std::uniform_real_distribution<double> pitch(-deg2rad(84.0), deg2rad(84.0));
  return {ang(rng), pitch(rng), ang(rng)};
}

}  // namespace

TEST(Geodesy, CurvatureRadiiAtEquatorAndPole) {
  const auto eq = curvature_radii(0.0, kEarth);
  EXPECT_DOUBLE_EQ(eq.transverse, 6378137.0);
  EXPECT_NEAR(eq.meridian, 6378137.0 * (1.0 - 0.00669437999), 1e-3);
  EXPECT_NEAR(eq.meridian, 6335439.0, 1.0);

  const auto pole = curvature_radii(kPi / 2.0, kEarth);
  EXPECT_NEAR(pole.meridian, pole.transverse, 1e-6);
  EXPECT_NEAR(pole.transverse, 6399594.0, 1.0);
}

TEST(Geodesy, TransverseRadiusMonotoneInLatitude) {
  double prev = 0.0;
  for (int i = 0; i < 90; ++i) {
    const double r = curvature_radii(deg2rad(i), kEarth).transverse;
    EXPECT_GE(r, prev);
    prev = r;
  }
}

TEST(Geodesy, DcmIdentityAndYaw) {
  EXPECT_TRUE(dcm_body_to_nav({0, 0, 0}).isApprox(Eigen::Matrix3d::Identity(), 1e-15));
  const Eigen::Matrix3d c = dcm_body_to_nav({0, 0, kPi / 2});
  EXPECT_NEAR(c(0, 0), 0.0, 1e-15);
  EXPECT_NEAR(c(1, 0), 1.0, 1e-15);
  EXPECT_NEAR(c(2, 0), 0.0, 1e-15);
}

TEST(Geodesy, DcmStandardElement33) {
  const Attitude a{0.3, -0.4, 1.1};
  EXPECT_NEAR(dcm_body_to_nav(a)(2, 2), std::cos(a.roll) * std::cos(a.pitch), 1e-15);
}

TEST(Geodesy, DcmOrthonormalOnRandomAttitudes) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 10000; ++i) {
    const Eigen::Matrix3d c = dcm_body_to_nav(random_attitude(rng));
    const Eigen::Matrix3d e = c * c.transpose() - Eigen::Matrix3d::Identity();
    ASSERT_LT(e.cwiseAbs().rowwise().sum().maxCoeff(), 1e-12);
    ASSERT_NEAR(c.determinant(), 1.0, 1e-12);
  }
}

TEST(Geodesy, EulerRateMatrixInvertsAttitudeRate) {
  const Attitude a{0.2, 0.3, -0.5};
  const Eigen::Vector3d rates(0.01, -0.02, 0.03);
  // Finite-difference body rate: C^T dC/dt = [w]x
  const double h = 1e-6;
  const Attitude ap{a.roll + h * rates(0), a.pitch + h * rates(1), a.yaw + h * rates(2)};
  const Attitude am{a.roll - h * rates(0), a.pitch - h * rates(1), a.yaw - h * rates(2)};
  const Eigen::Matrix3d cdot = (dcm_body_to_nav(ap) - dcm_body_to_nav(am)) / (2 * h);
  const Eigen::Matrix3d w = dcm_body_to_nav(a).transpose() * cdot;
  const Eigen::Vector3d wb(w(2, 1), w(0, 2), w(1, 0));
  EXPECT_TRUE(wb.isApprox(euler_rate_matrix(a) * rates, 1e-7));
}

TEST(Geodesy, GimbalGuard) {
  EXPECT_NO_THROW(check_attitude({0, deg2rad(84.9), 0}));
  try {
    check_attitude({0, deg2rad(85.5), 0});
    FAIL();
  } catch (const NavError& e) {
    EXPECT_EQ(e.code(), ErrorCode::GimbalLock);
  }
}

TEST(Geodesy, EarthAndTransportRates) {
  const Eigen::Vector3d w0 = earth_rate_nav(0.0, kEarth);
  EXPECT_NEAR(w0.x(), 7.2921150e-5, 1e-20);
  EXPECT_EQ(w0.y(), 0.0);
  EXPECT_NEAR(w0.z(), 0.0, 1e-20);

  GeodeticPosition p{deg2rad(18.946), 0.3, 50.0};
  EXPECT_TRUE(transport_rate(p, Eigen::Vector3d::Zero(), kEarth).isZero());

  const Eigen::Vector3d v(0.0, 5.144, 0.0);
  const auto r = curvature_radii(p.lat, kEarth);
  const Eigen::Vector3d w = transport_rate(p, v, kEarth);
  EXPECT_NEAR(w.x(), 5.144 / (r.transverse + 50.0), 1e-18);
  EXPECT_NEAR(w.y(), 0.0, 1e-18);
  EXPECT_NEAR(w.z(), -5.144 * std::tan(p.lat) / (r.transverse + 50.0), 1e-18);
}

TEST(Geodesy, EcefOfOrigin) {
  const Eigen::Vector3d e = geodetic_to_ecef({0, 0, 0}, kEarth);
  EXPECT_NEAR(e.x(), 6378137.0, 1e-9);
  EXPECT_NEAR(e.y(), 0.0, 1e-9);
  EXPECT_NEAR(e.z(), 0.0, 1e-9);
}

TEST(Geodesy, EcefMatchesScalarClosedForm) {
  const double lat = deg2rad(18.946), lon = deg2rad(72.854), depth = 50.0;
  const double a = 6378137.0, e2 = 0.0818191908426 * 0.0818191908426;
  const double rn = a / std::sqrt(1 - e2 * std::sin(lat) * std::sin(lat));
  const double h = -depth;
  const Eigen::Vector3d e = geodetic_to_ecef({lat, lon, depth}, kEarth);
  EXPECT_NEAR(e.x(), (rn + h) * std::cos(lat) * std::cos(lon), 1e-6);
  EXPECT_NEAR(e.y(), (rn + h) * std::cos(lat) * std::sin(lon), 1e-6);
  EXPECT_NEAR(e.z(), (rn * (1 - e2) + h) * std::sin(lat), 1e-6);
}

TEST(Geodesy, NedSelfReferenceIsZero) {
  const GeodeticPosition p{deg2rad(18.946), deg2rad(72.854), 50.0};
  EXPECT_LT(geodetic_to_ned(p, p, kEarth).norm(), 1e-9);
}

TEST(Geodesy, NedRoundTripNearScenario) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(-0.05, 0.05);
  std::uniform_real_distribution<double> z(0.0, 600.0);
  const GeodeticPosition ref{deg2rad(18.946), deg2rad(72.854), 0.0};
  for (int i = 0; i < 1000; ++i) {
    const GeodeticPosition p{ref.lat + deg2rad(d(rng)), ref.lon + deg2rad(d(rng)), z(rng)};
    const Eigen::Vector3d n = geodetic_to_ned(p, ref, kEarth);
    const GeodeticPosition q = ned_to_geodetic(n, ref, kEarth);
    const Eigen::Vector3d back = geodetic_to_ned(q, ref, kEarth);
    ASSERT_LT((back - n).norm(), 1e-9);
    ASSERT_LT((geodetic_to_ecef(q, kEarth) - geodetic_to_ecef(p, kEarth)).norm(), 1e-9);
  }
}

TEST(Geodesy, WrapAngle) {
  EXPECT_NEAR(wrap_angle(3 * kPi / 2), -kPi / 2, 1e-15);
  EXPECT_DOUBLE_EQ(wrap_angle(-kPi), kPi);
  EXPECT_DOUBLE_EQ(wrap_angle(kPi), kPi);
  EXPECT_DOUBLE_EQ(wrap_angle(0.1), 0.1);
  for (double a : {-10.0, -3.0, 0.5, 7.0, 100.0}) {
    EXPECT_DOUBLE_EQ(wrap_angle(wrap_angle(a)), wrap_angle(a));
  }
}

TEST(Geodesy, EarthModelValidation) {
  EarthModel e;
  e.eccentricity = 1.2;
  EXPECT_THROW(e.validate(), NavError);
  EXPECT_NO_THROW(EarthModel{}.validate());
}
