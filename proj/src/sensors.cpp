#include "uwnav/sensors.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "uwnav/error.hpp"
#include "uwnav/rng.hpp"

namespace uwnav {

void GaussianMixture::validate() const {
  if (components.empty()) throw NavError(ErrorCode::Config, "mixture has no components");
  double total = 0.0;
  for (const auto& c : components) {
    if (!(c.weight > 0.0)) throw NavError(ErrorCode::Config, "mixture weight must be positive");
    if (!(c.std > 0.0)) throw NavError(ErrorCode::Config, "mixture std must be positive");
    if (!std::isfinite(c.mean)) throw NavError(ErrorCode::Config, "mixture mean must be finite");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw NavError(ErrorCode::Config, "mixture weights sum to " + std::to_string(total));
  }
}

double mixture_sample(const GaussianMixture& gm, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pick(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double u = pick(rng);
  double cum = 0.0;
  const GaussianMixture::Component* chosen = &gm.components.back();
  for (const auto& c : gm.components) {
    cum += c.weight;
    if (u < cum) {
      chosen = &c;
      break;
    }
  }
  return chosen->mean + chosen->std * gauss(rng);
}

double mixture_equivalent_cov(const GaussianMixture& gm) {
  double second = 0.0, first = 0.0;
  for (const auto& c : gm.components) {
    second += c.weight * (c.std * c.std + c.mean * c.mean);
    first += c.weight * c.mean;
  }
  return second - first * first;
}

void MeasurementNoise::validate() const {
  for (const auto* gm : {&vel_n, &vel_e, &vel_d, &depth, &roll, &pitch, &yaw, &lat, &lon}) {
    gm->validate();
  }
}

Eigen::VectorXd MeasurementNoise::equivalent_variances(MeasurementKind kind) const {
  Eigen::VectorXd r(measurement_dim(kind));
  r(kMeasVelN) = mixture_equivalent_cov(vel_n);
  r(kMeasVelE) = mixture_equivalent_cov(vel_e);
  r(kMeasVelD) = mixture_equivalent_cov(vel_d);
  r(kMeasDepth) = mixture_equivalent_cov(depth);
  r(kMeasRoll) = mixture_equivalent_cov(roll);
  r(kMeasPitch) = mixture_equivalent_cov(pitch);
  r(kMeasYaw) = mixture_equivalent_cov(yaw);
  if (kind == MeasurementKind::ModelII) {
    r(kMeasLat) = mixture_equivalent_cov(lat);
    r(kMeasLon) = mixture_equivalent_cov(lon);
  }
  return r;
}

MeasurementNoise MeasurementNoise::reference() {
  const auto mix = [](double inlier, double outlier) {
    return GaussianMixture{{{0.9, 0.0, inlier}, {0.1, 0.0, outlier}}};
  };
  MeasurementNoise n;
  n.vel_n = n.vel_e = n.vel_d = mix(0.1, 1.0);
  n.depth = mix(1.0, 10.0);
  n.roll = n.pitch = n.yaw = mix(deg2rad(0.5), deg2rad(1.0));
  n.lat = n.lon = mix(deg2rad(0.0898), deg2rad(0.898));
  return n;
}

MeasurementNoise MeasurementNoise::negligible() {
  MeasurementNoise n;
  const auto tiny = GaussianMixture::gaussian(1e-300);
  n.vel_n = n.vel_e = n.vel_d = n.depth = n.roll = n.pitch = n.yaw = n.lat = n.lon = tiny;
  return n;
}

ApsGeometry ApsGeometry::reference() {
  ApsGeometry g;
  g.gib1 = {deg2rad(18.9461), deg2rad(72.8541), 0.0};
  g.gib2 = {deg2rad(18.9459), deg2rad(72.8539), 0.0};
  g.ref_point = {deg2rad(18.946), deg2rad(72.854), 0.0};
  return g;
}

Eigen::Matrix<double, 7, 1> measure_model1(const NavState& x) {
  check_attitude(x.att);
  Eigen::Matrix<double, 7, 1> y;
  y << x.vel_ned, x.pos.depth, wrap_angle(x.att.roll), x.att.pitch, wrap_angle(x.att.yaw);
  return y;
}

Eigen::Matrix<double, 9, 1> measure_model2(const NavState& x) {
  Eigen::Matrix<double, 9, 1> y;
  y << measure_model1(x), x.pos.lat, wrap_angle(x.pos.lon);
  return y;
}

Eigen::VectorXd measure(const NavState& x, MeasurementKind kind) {
  if (kind == MeasurementKind::ModelI) return measure_model1(x);
  return measure_model2(x);
}

RollPitch roll_pitch_from_accel(const Eigen::Vector3d& f_b, double g) {
  const double sp = f_b.x() / g;
  if (!(std::abs(sp) <= 1.0)) {
    throw NavError(ErrorCode::OutOfDomain, "forward specific force exceeds gravity");
  }
  const double pitch = std::asin(sp);
  const double sr = f_b.y() / (g * std::cos(pitch));
  if (!(std::abs(sr) <= 1.0)) {
    throw NavError(ErrorCode::OutOfDomain, "starboard specific force exceeds g cos(pitch)");
  }
  return {-std::asin(sr), pitch};
}

std::pair<double, double> aps_bearings(const GeodeticPosition& vehicle, const ApsGeometry& geom,
                                       const EarthModel& earth) {
  const Eigen::Vector3d p = geodetic_to_ned(vehicle, geom.ref_point, earth);
  const Eigen::Vector3d b1 = geodetic_to_ned(geom.gib1, geom.ref_point, earth);
  const Eigen::Vector3d b2 = geodetic_to_ned(geom.gib2, geom.ref_point, earth);
  const auto bearing = [&](const Eigen::Vector3d& b) {
    const double dn = p.x() - b.x();
    const double de = p.y() - b.y();
    if (std::hypot(dn, de) < 1e-6) {
      throw NavError(ErrorCode::CoincidentBeacon, "vehicle is above a beacon");
    }
    return std::atan2(dn, de);
  };
  return {bearing(b1), bearing(b2)};
}

GeodeticPosition aps_fix(double beta1, double beta2, const ApsGeometry& geom,
                         const EarthModel& earth, double depth) {
  if (std::abs(std::sin(beta1 - beta2)) < 1e-9) {
    throw NavError(ErrorCode::DegenerateGeometry, "bearing lines are parallel");
  }
  // Bearing directions in the (lon, lat) plane. With slopes s_i = w_i / u_i the solution
  // below is the two-line intersection
  //   l = (L2 - L1 + l1 s1 - l2 s2) / (s1 - s2),
  //   L = (L2 s1 - L1 s2 + (l1 - l2) s1 s2) / (s1 - s2),
  // multiplied through by u1 u2 so vertical bearings stay finite.
  const auto radii = curvature_radii(geom.ref_point.lat, earth);
  const double scale_n = radii.meridian - geom.ref_point.depth;
  const double scale_e = (radii.transverse - geom.ref_point.depth) * std::cos(geom.ref_point.lat);
  const double u1 = std::cos(beta1) / scale_e, w1 = std::sin(beta1) / scale_n;
  const double u2 = std::cos(beta2) / scale_e, w2 = std::sin(beta2) / scale_n;
  const double l1 = geom.gib1.lon, L1 = geom.gib1.lat;
  const double l2 = geom.gib2.lon, L2 = geom.gib2.lat;
  const double den = w1 * u2 - w2 * u1;
  GeodeticPosition fix;
  fix.lon = (u1 * u2 * (L2 - L1) + w1 * u2 * l1 - w2 * u1 * l2) / den;
  fix.lat = (L2 * w1 * u2 - L1 * w2 * u1 + (l1 - l2) * w1 * w2) / den;
  fix.depth = depth;

  // Gauss-Newton on the exact bearing model with the local-scale Jacobian.
  const Eigen::Vector3d b1 = geodetic_to_ned(geom.gib1, geom.ref_point, earth);
  const Eigen::Vector3d b2 = geodetic_to_ned(geom.gib2, geom.ref_point, earth);
  for (int it = 0; it < 20; ++it) {
    const auto [g1, g2] = aps_bearings(fix, geom, earth);
    const Eigen::Vector2d r(wrap_angle(beta1 - g1), wrap_angle(beta2 - g2));
    const Eigen::Vector3d p = geodetic_to_ned(fix, geom.ref_point, earth);
    Eigen::Matrix2d j;
    for (int k = 0; k < 2; ++k) {
      const Eigen::Vector3d& b = k == 0 ? b1 : b2;
      const double dn = p.x() - b.x(), de = p.y() - b.y();
      const double rr = dn * dn + de * de;
      // d(beta)/d(lat), d(beta)/d(lon)
      j(k, 0) = de / rr * scale_n;
      j(k, 1) = -dn / rr * scale_e;
    }
    const Eigen::Vector2d step = j.partialPivLu().solve(r);
    fix.lat += step(0);
    fix.lon += step(1);
    if (step.cwiseAbs().maxCoeff() < 1e-16) break;
  }
  return fix;
}

namespace {

enum NoiseStream : std::uint64_t {
  kStreamVelN = 0, kStreamVelE, kStreamVelD, kStreamDepth, kStreamRoll, kStreamPitch, kStreamYaw,
  kStreamLat, kStreamLon,
};

}  // namespace

std::vector<MeasurementVector> synthesize_measurements(const std::vector<TruthSample>& truth,
                                                       const MeasurementNoise& noise,
                                                       const ApsGeometry& geom,
                                                       const MeasurementSynthesisOptions& opts,
                                                       std::uint64_t stream_seed,
                                                       const EarthModel& earth) {
  std::mt19937_64 rng[9];
  for (std::uint64_t s = 0; s < 9; ++s) rng[s] = make_stream(stream_seed, 0, s);

  std::vector<MeasurementVector> out;
  out.reserve(truth.size());
  for (const auto& sample : truth) {
    const NavState& x = sample.state;
    const bool aps = sample.t <= opts.aps_cutoff_t + 1e-9;
    MeasurementVector m;
    m.t = sample.t;
    m.kind = aps ? MeasurementKind::ModelII : MeasurementKind::ModelI;
    m.values.resize(measurement_dim(m.kind));

    // DVL: body-frame velocity plus body-frame noise, rotated into NED.
    const Eigen::Matrix3d c = dcm_body_to_nav(x.att);
    const Eigen::Vector3d body_noise(mixture_sample(noise.vel_n, rng[kStreamVelN]),
                                     mixture_sample(noise.vel_e, rng[kStreamVelE]),
                                     mixture_sample(noise.vel_d, rng[kStreamVelD]));
    const Eigen::Vector3d v_body = c.transpose() * x.vel_ned + body_noise;
    m.values.segment<3>(kMeasVelN) = c * v_body;

    m.values(kMeasDepth) = x.pos.depth + mixture_sample(noise.depth, rng[kStreamDepth]);

    // Levelling from the gravity-only specific force.
    const Eigen::Vector3d f_static = c.transpose() * Eigen::Vector3d(0.0, 0.0, -earth.gravity);
    const RollPitch rp = roll_pitch_from_accel(f_static, earth.gravity);
    m.values(kMeasRoll) = wrap_angle(rp.roll + mixture_sample(noise.roll, rng[kStreamRoll]));
    m.values(kMeasPitch) = rp.pitch + mixture_sample(noise.pitch, rng[kStreamPitch]);
    m.values(kMeasYaw) = wrap_angle(x.att.yaw + mixture_sample(noise.yaw, rng[kStreamYaw]));

    if (aps) {
      const auto [b1, b2] = aps_bearings(x.pos, geom, earth);
      const GeodeticPosition fix = aps_fix(b1, b2, geom, earth, x.pos.depth);
      m.values(kMeasLat) = fix.lat + mixture_sample(noise.lat, rng[kStreamLat]);
      m.values(kMeasLon) = wrap_angle(fix.lon + mixture_sample(noise.lon, rng[kStreamLon]));
    }
    out.push_back(std::move(m));
  }
  return out;
}

Eigen::VectorXd observability_singular_values(const std::vector<NavState>& window,
                                              const std::vector<ImuSample>& imu, double dt,
                                              MeasurementKind kind, const EarthModel& earth) {
  if (window.empty() || imu.size() + 1 < window.size()) {
    throw NavError(ErrorCode::MismatchedLengths, "observability window and IMU misaligned");
  }
  const int m = measurement_dim(kind);
  const auto h = [&](const StateVector& x) -> Eigen::VectorXd {
    return measure(NavState::from_vector(x), kind);
  };
  const auto jac = [](const auto& fn, const StateVector& x, int rows) {
    Eigen::MatrixXd j(rows, kStateDim);
    for (int c = 0; c < kStateDim; ++c) {
      const double step = 1e-6 * std::max(1.0, std::abs(x(c)));
      StateVector xp = x, xm = x;
      xp(c) += step;
      xm(c) -= step;
      j.col(c) = (fn(xp) - fn(xm)) / (2.0 * step);
    }
    return j;
  };

  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(kStateDim, kStateDim);
  Eigen::MatrixXd phi = Eigen::MatrixXd::Identity(kStateDim, kStateDim);
  for (std::size_t k = 0; k < window.size(); ++k) {
    const StateVector xk = window[k].to_vector();
    const Eigen::MatrixXd hk = jac(h, xk, m) * phi;
    gram += hk.transpose() * hk;
    if (k + 1 < window.size()) {
      const auto f = [&](const StateVector& x) -> Eigen::VectorXd {
        return integrate_step(x, imu[k], dt, earth);
      };
      phi = jac(f, xk, kStateDim) * phi;
    }
  }
  return Eigen::JacobiSVD<Eigen::MatrixXd>(gram).singularValues();
}

int numerical_rank(const Eigen::VectorXd& singular_values, double rel_tol) {
  if (singular_values.size() == 0) return 0;
  const double tol = rel_tol * singular_values.maxCoeff();
  return static_cast<int>((singular_values.array() > tol).count());
}

}  // namespace uwnav
