#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "uwnav/dynamics.hpp"
#include "uwnav/filters.hpp"
#include "uwnav/mcc.hpp"
#include "uwnav/sensors.hpp"

namespace uwnav::harness {

enum class RmseMode { Printed, Conventional };

/// One configured estimator. Robust filters carry their own kernel bandwidth.
struct FilterSpec {
  FilterKind kind = FilterKind::PCKF;
  bool robust = false;
  double sigma = 2.0;
  BasisMode basis = BasisMode::Orthonormal;
  std::optional<double> kappa;

  /// "PCKF", "MC-PCKF(sigma=2)", ...
  std::string label() const;
  EngineConfig engine() const { return {kind, kappa, basis}; }
};

/// Parses "UKF", "CKF", "PCKF" and their "MC-" variants. Throws NavError(Config).
FilterSpec parse_filter_kind(const std::string& name);

struct RunConfig {
  std::uint64_t seed = 20240501;
  int mc_runs = 25;
  int threads = 0;  ///< 0 selects the hardware concurrency
  std::string scenario_file;  ///< empty selects the built-in schedule
  double dt_truth = 0.01;
  double dt_filter = 1.0;
  double aps_cutoff = 200.0;
  RmseMode rmse_mode = RmseMode::Printed;

  EarthModel earth;
  NavState initial_truth = reference_initial_state();
  StateVector initial_estimate;
  StateVector initial_std;
  ImuNoise imu_noise;
  StateVector process_noise_diag;
  ApsGeometry aps = ApsGeometry::reference();
  MeasurementNoise noise = MeasurementNoise::reference();
  MccConfig mcc;

  std::vector<FilterSpec> filters;

  /// Reference scenario settings with all six filter kinds at sigma 0.5 and 2.
  static RunConfig defaults();
  void validate() const;
  std::vector<ScenarioStage> stages() const;
};

/// Reads a JSON config. Keys absent from the file keep their defaults. Angles are in
/// degrees, lengths in metres.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text);

/// Canonical JSON of the config, used for run metadata.
std::string config_to_json(const RunConfig& cfg);

/// Expands base filter names and a sigma list into specs. Robust kinds get one spec per
/// sigma; duplicates are dropped in first-seen order.
std::vector<FilterSpec> expand_filters(const std::vector<std::string>& names,
                                       const std::vector<double>& sigmas, BasisMode basis,
                                       std::optional<double> kappa);

}  // namespace uwnav::harness
