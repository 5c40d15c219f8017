#include "uwnav/geodesy.hpp"

#include <cmath>
#include <string>

#include "uwnav/error.hpp"

namespace uwnav {

void EarthModel::validate() const {
  if (!(eccentricity > 0.0 && eccentricity < 1.0)) {
    throw NavError(ErrorCode::Config, "eccentricity must lie in (0, 1)");
  }
  if (!(semi_major > 0.0)) throw NavError(ErrorCode::Config, "semi-major axis must be positive");
  if (!(gravity > 0.0)) throw NavError(ErrorCode::Config, "gravity must be positive");
  if (!std::isfinite(omega_earth)) throw NavError(ErrorCode::Config, "earth rate must be finite");
}

double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * kPi);  // [-pi, pi]
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

CurvatureRadii curvature_radii(double lat, const EarthModel& earth) {
  const double s = std::sin(lat);
  const double den = 1.0 - earth.ecc2() * s * s;
  const double rn = earth.semi_major / std::sqrt(den);
  const double rm = earth.semi_major * (1.0 - earth.ecc2()) / (den * std::sqrt(den));
  return {rm, rn};
}

Eigen::Matrix3d dcm_body_to_nav(const Attitude& att) {
  const double cr = std::cos(att.roll), sr = std::sin(att.roll);
  const double cp = std::cos(att.pitch), sp = std::sin(att.pitch);
  const double cy = std::cos(att.yaw), sy = std::sin(att.yaw);
  Eigen::Matrix3d c;
  c << cp * cy, -cr * sy + sr * sp * cy, sr * sy + cr * sp * cy,
       cp * sy, cr * cy + sr * sp * sy, -sr * cy + cr * sp * sy,
       -sp, sr * cp, cr * cp;
  return c;
}

Eigen::Matrix3d euler_rate_matrix(const Attitude& att) {
  const double cr = std::cos(att.roll), sr = std::sin(att.roll);
  const double cp = std::cos(att.pitch), sp = std::sin(att.pitch);
  Eigen::Matrix3d m;
  m << 1.0, 0.0, -sp,
       0.0, cr, sr * cp,
       0.0, -sr, cr * cp;
  return m;
}

void check_attitude(const Attitude& att) {
  if (!std::isfinite(att.roll) || !std::isfinite(att.pitch) || !std::isfinite(att.yaw)) {
    throw NavError(ErrorCode::GimbalLock, "non-finite attitude");
  }
  if (std::abs(att.pitch) > kGimbalGuard) {
    throw NavError(ErrorCode::GimbalLock,
                   "pitch " + std::to_string(rad2deg(att.pitch)) + " deg exceeds guard");
  }
}

Eigen::Vector3d earth_rate_nav(double lat, const EarthModel& earth) {
  return {earth.omega_earth * std::cos(lat), 0.0, -earth.omega_earth * std::sin(lat)};
}

Eigen::Vector3d transport_rate(const GeodeticPosition& pos, const Eigen::Vector3d& vel_ned,
                               const EarthModel& earth) {
  const auto r = curvature_radii(pos.lat, earth);
  const double rn = r.transverse + pos.depth;
  const double rm = r.meridian + pos.depth;
  return {vel_ned.y() / rn, -vel_ned.x() / rm, -vel_ned.y() * std::tan(pos.lat) / rn};
}

Eigen::Vector3d geodetic_to_ecef(const GeodeticPosition& p, const EarthModel& earth) {
  const double h = -p.depth;
  const double rn = curvature_radii(p.lat, earth).transverse;
  const double cl = std::cos(p.lat), sl = std::sin(p.lat);
  return {(rn + h) * cl * std::cos(p.lon), (rn + h) * cl * std::sin(p.lon),
          (rn * (1.0 - earth.ecc2()) + h) * sl};
}

GeodeticPosition ecef_to_geodetic(const Eigen::Vector3d& p_e, const EarthModel& earth) {
  const double e2 = earth.ecc2();
  const double rho = std::hypot(p_e.x(), p_e.y());
  const double lon = std::atan2(p_e.y(), p_e.x());
  double lat = std::atan2(p_e.z(), rho * (1.0 - e2));
  double h = 0.0;
  for (int it = 0; it < 50; ++it) {
    const double s = std::sin(lat);
    const double rn = earth.semi_major / std::sqrt(1.0 - e2 * s * s);
    const double next = std::atan2(p_e.z() + e2 * rn * s, rho);
    const double cn = std::cos(next), sn = std::sin(next);
    const double rn_next = earth.semi_major / std::sqrt(1.0 - e2 * sn * sn);
    // Height from whichever projection is better conditioned.
    h = (std::abs(cn) > 0.5) ? rho / cn - rn_next : p_e.z() / sn - rn_next * (1.0 - e2);
    const bool done = std::abs(next - lat) < 1e-15;
    lat = next;
    if (done) break;
  }
  return {lat, lon, -h};
}

Eigen::Matrix3d ecef_to_ned_rotation(const GeodeticPosition& ref) {
  const double cl = std::cos(ref.lat), sl = std::sin(ref.lat);
  const double co = std::cos(ref.lon), so = std::sin(ref.lon);
  Eigen::Matrix3d c;
  c << -sl * co, -sl * so, cl,
       -so, co, 0.0,
       -cl * co, -cl * so, -sl;
  return c;
}

Eigen::Vector3d ecef_to_ned(const Eigen::Vector3d& p_e, const GeodeticPosition& ref,
                            const EarthModel& earth) {
  return ecef_to_ned_rotation(ref) * (p_e - geodetic_to_ecef(ref, earth));
}

Eigen::Vector3d ned_to_ecef(const Eigen::Vector3d& p_n, const GeodeticPosition& ref,
                            const EarthModel& earth) {
  return geodetic_to_ecef(ref, earth) + ecef_to_ned_rotation(ref).transpose() * p_n;
}

namespace {

// cos(a) - cos(b) and sin(a) - sin(b) without cancellation.
double cos_diff(double a, double b) { return -2.0 * std::sin(0.5 * (a + b)) * std::sin(0.5 * (a - b)); }
double sin_diff(double a, double b) { return 2.0 * std::cos(0.5 * (a + b)) * std::sin(0.5 * (a - b)); }

}  // namespace

Eigen::Vector3d geodetic_to_ned(const GeodeticPosition& p, const GeodeticPosition& ref,
                                const EarthModel& earth) {
  // ECEF difference expanded term by term so nearby points keep full precision.
  const double e2 = earth.ecc2();
  const double sp = std::sin(p.lat), sr = std::sin(ref.lat);
  const double cp = std::cos(p.lat), cr = std::cos(ref.lat);
  const double dp = std::sqrt(1.0 - e2 * sp * sp), dr = std::sqrt(1.0 - e2 * sr * sr);
  const double rn_r = earth.semi_major / dr;
  const double d_rn = earth.semi_major * e2 * sin_diff(p.lat, ref.lat) * (sp + sr) /
                      (dp * dr * (dp + dr));
  const double a_r = rn_r - ref.depth;
  const double d_a = d_rn - (p.depth - ref.depth);
  const double d_cl = cos_diff(p.lat, ref.lat);
  const double co_p = std::cos(p.lon);
  const double so_p = std::sin(p.lon);
  // (a cosL cos l), (a cosL sin l) differences
  const double d_cc = d_cl * co_p + cr * cos_diff(p.lon, ref.lon);
  const double d_cs = d_cl * so_p + cr * sin_diff(p.lon, ref.lon);
  const double b_r = rn_r * (1.0 - e2) - ref.depth;
  const double d_b = d_rn * (1.0 - e2) - (p.depth - ref.depth);
  Eigen::Vector3d de;
  de.x() = d_a * cp * co_p + a_r * d_cc;
  de.y() = d_a * cp * so_p + a_r * d_cs;
  de.z() = d_b * sp + b_r * sin_diff(p.lat, ref.lat);
  return ecef_to_ned_rotation(ref) * de;
}

GeodeticPosition ned_to_geodetic(const Eigen::Vector3d& p_n, const GeodeticPosition& ref,
                                 const EarthModel& earth) {
  GeodeticPosition q = ecef_to_geodetic(ned_to_ecef(p_n, ref, earth), earth);
  for (int it = 0; it < 3; ++it) {
    const Eigen::Vector3d r = p_n - geodetic_to_ned(q, ref, earth);
    const CurvatureRadii rr = curvature_radii(q.lat, earth);
    const Eigen::Vector3d local = ecef_to_ned_rotation(q) * ecef_to_ned_rotation(ref).transpose() * r;
    q.lat += local.x() / (rr.meridian - q.depth);
    q.lon += local.y() / ((rr.transverse - q.depth) * std::cos(q.lat));
    q.depth += local.z();
  }
  return q;
}

}  // namespace uwnav
