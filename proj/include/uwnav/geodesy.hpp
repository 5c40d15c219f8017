#pragma once

#include <Eigen/Dense>

namespace uwnav {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDegToRad = kPi / 180.0;
inline constexpr double kRadToDeg = 180.0 / kPi;

constexpr double deg2rad(double deg) { return deg * kDegToRad; }
constexpr double rad2deg(double rad) { return rad * kRadToDeg; }

/// Ellipsoid and rotation constants. Defaults are WGS-84 with standard gravity.
struct EarthModel {
  double omega_earth = 7.2921150e-5;      ///< rad/s
  double semi_major = 6378137.0;          ///< m
  double eccentricity = 0.0818191908426;  ///< first eccentricity
  double gravity = 9.80665;               ///< m/s^2, acts along +Down

  double ecc2() const { return eccentricity * eccentricity; }

  /// Throws NavError(Config) when a field is out of range.
  void validate() const;

  static EarthModel wgs84() { return {}; }
};

/// Latitude/longitude in radians, depth positive down in metres.
struct GeodeticPosition {
  double lat = 0.0;
  double lon = 0.0;
  double depth = 0.0;
};

/// ZYX Euler angles in radians.
struct Attitude {
  double roll = 0.0;
  double pitch = 0.0;
  double yaw = 0.0;
};

struct CurvatureRadii {
  double meridian;    ///< R_M
  double transverse;  ///< R_N (prime vertical)
};

/// Largest |pitch| accepted before the Euler-rate matrix is treated as locked.
inline constexpr double kGimbalGuard = 85.0 * kDegToRad;

/// Wraps to (-pi, pi].
double wrap_angle(double a);

CurvatureRadii curvature_radii(double lat, const EarthModel& earth);

/// Body-to-NED direction cosine matrix, ZYX (yaw-pitch-roll) convention.
Eigen::Matrix3d dcm_body_to_nav(const Attitude& att);

/// Maps Euler-angle rates to body rates: omega_b = euler_rate_matrix * [phi', theta', psi'].
Eigen::Matrix3d euler_rate_matrix(const Attitude& att);

/// Throws NavError(GimbalLock) when |pitch| exceeds kGimbalGuard or any angle is non-finite.
void check_attitude(const Attitude& att);

/// Earth rotation rate resolved in NED at the given latitude.
Eigen::Vector3d earth_rate_nav(double lat, const EarthModel& earth);

/// Transport rate of the NED frame over the ellipsoid.
Eigen::Vector3d transport_rate(const GeodeticPosition& pos, const Eigen::Vector3d& vel_ned,
                               const EarthModel& earth);

Eigen::Vector3d geodetic_to_ecef(const GeodeticPosition& p, const EarthModel& earth);

/// Iterative inverse of geodetic_to_ecef, converged to machine precision.
GeodeticPosition ecef_to_geodetic(const Eigen::Vector3d& p_e, const EarthModel& earth);

/// Rotation from ECEF to the NED frame anchored at the reference point.
Eigen::Matrix3d ecef_to_ned_rotation(const GeodeticPosition& ref);

Eigen::Vector3d ecef_to_ned(const Eigen::Vector3d& p_e, const GeodeticPosition& ref,
                            const EarthModel& earth);
Eigen::Vector3d ned_to_ecef(const Eigen::Vector3d& p_n, const GeodeticPosition& ref,
                            const EarthModel& earth);

Eigen::Vector3d geodetic_to_ned(const GeodeticPosition& p, const GeodeticPosition& ref,
                                const EarthModel& earth);
GeodeticPosition ned_to_geodetic(const Eigen::Vector3d& p_n, const GeodeticPosition& ref,
                                 const EarthModel& earth);

}  // namespace uwnav
