#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "uwnav/dynamics.hpp"
#include "uwnav/geodesy.hpp"

namespace uwnav {

/// Weighted sum of scalar Gaussians.
struct GaussianMixture {
  struct Component {
    double weight;
    double mean;
    double std;
  };
  std::vector<Component> components;

  /// Throws NavError(Config) unless weights are positive and sum to 1 and stds are positive.
  void validate() const;

  static GaussianMixture gaussian(double std) { return {{{1.0, 0.0, std}}}; }
  /// w * N(0, inlier^2) + (1 - w) * N(0, outlier^2)
  static GaussianMixture contaminated(double w, double inlier_std, double outlier_std) {
    return {{{w, 0.0, inlier_std}, {1.0 - w, 0.0, outlier_std}}};
  }
};

double mixture_sample(const GaussianMixture& gm, std::mt19937_64& rng);

/// Variance of the mixture: sum w (s^2 + mu^2) - (sum w mu)^2.
double mixture_equivalent_cov(const GaussianMixture& gm);

enum class MeasurementKind { ModelI, ModelII };

constexpr int measurement_dim(MeasurementKind kind) {
  return kind == MeasurementKind::ModelI ? 7 : 9;
}

/// Channel order: vN, vE, vD, Z, roll, pitch, yaw, then lat, lon under ModelII.
enum MeasurementIndex : int {
  kMeasVelN = 0, kMeasVelE, kMeasVelD, kMeasDepth, kMeasRoll, kMeasPitch, kMeasYaw,
  kMeasLat, kMeasLon,
};

struct MeasurementVector {
  Eigen::VectorXd values;
  MeasurementKind kind = MeasurementKind::ModelI;
  double t = 0.0;
};

/// Per-channel measurement noise in SI units (m, m/s, rad). The velocity mixtures are
/// drawn along the body axes.
struct MeasurementNoise {
  GaussianMixture vel_n, vel_e, vel_d, depth, roll, pitch, yaw, lat, lon;

  void validate() const;
  /// Equivalent (moment-matched) variances in channel order for the given model.
  Eigen::VectorXd equivalent_variances(MeasurementKind kind) const;
  /// Reference noise levels with 10 % heavy-tailed contamination on every channel.
  static MeasurementNoise reference();
  /// All channels with a near-zero single Gaussian; used for noise-free checks.
  static MeasurementNoise negligible();
};

/// Two surface beacons plus the origin of the local NED frame used for bearings.
struct ApsGeometry {
  GeodeticPosition gib1;
  GeodeticPosition gib2;
  GeodeticPosition ref_point;

  static ApsGeometry reference();
};

struct RollPitch {
  double roll;
  double pitch;
};

/// Noise-free h(X) of model I: (v^n, Z, roll, pitch, yaw) with angles wrapped.
Eigen::Matrix<double, 7, 1> measure_model1(const NavState& x);
/// Model I plus (lat, lon).
Eigen::Matrix<double, 9, 1> measure_model2(const NavState& x);
Eigen::VectorXd measure(const NavState& x, MeasurementKind kind);

/// Quasi-static levelling: pitch = asin(f_x / g), roll = -asin(f_y / (g cos pitch)).
/// Throws OutOfDomain when either arcsine argument leaves [-1, 1].
RollPitch roll_pitch_from_accel(const Eigen::Vector3d& f_b, double g);

/// Bearings of the vehicle from each beacon, atan2(dN, dE) in the local NED frame.
std::pair<double, double> aps_bearings(const GeodeticPosition& vehicle, const ApsGeometry& geom,
                                       const EarthModel& earth);

/// Intersects the two bearing lines through the beacons in the (lon, lat) plane with
/// slopes mapped by local equirectangular scaling, then refines with Gauss-Newton on
/// the exact bearing model at the given depth so that aps_bearings(fix) reproduces
/// the inputs. Throws DegenerateGeometry for parallel bearing lines.
GeodeticPosition aps_fix(double beta1, double beta2, const ApsGeometry& geom,
                         const EarthModel& earth, double depth = 0.0);

struct MeasurementSynthesisOptions {
  double aps_cutoff_t = 200.0;  ///< APS fixes available for t <= cutoff
};

/// Measurements for each truth sample. Each channel draws from its own RNG stream
/// derived from stream_seed, so channels never share draws.
std::vector<MeasurementVector> synthesize_measurements(const std::vector<TruthSample>& truth,
                                                       const MeasurementNoise& noise,
                                                       const ApsGeometry& geom,
                                                       const MeasurementSynthesisOptions& opts,
                                                       std::uint64_t stream_seed,
                                                       const EarthModel& earth);

/// Singular values of the discrete observability Gramian accumulated along the given
/// window, with Jacobians from central differences of integrate_step and measure.
Eigen::VectorXd observability_singular_values(const std::vector<NavState>& window,
                                              const std::vector<ImuSample>& imu, double dt,
                                              MeasurementKind kind, const EarthModel& earth);

/// Count of singular values above rel_tol * max.
int numerical_rank(const Eigen::VectorXd& singular_values, double rel_tol = 1e-8);

}  // namespace uwnav
