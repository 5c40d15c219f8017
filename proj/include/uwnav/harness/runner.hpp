#pragma once

#include <Eigen/Dense>
#include <vector>

#include "uwnav/harness/config.hpp"

namespace uwnav::harness {

/// Truth shared by every trial, sampled at the filter rate.
struct Reference {
  std::vector<ScenarioStage> stages;
  std::vector<TruthSample> truth_fine;
  std::vector<TruthSample> truth;  ///< decimated to dt_filter, truth[0] at t = 0
};

Reference make_reference(const RunConfig& cfg);

/// Noise realisation of one Monte-Carlo trial. Every filter in the trial consumes it.
struct TrialData {
  std::vector<ImuSample> imu;                 ///< imu[k] covers [t_k, t_k+1]
  std::vector<MeasurementVector> measurements;  ///< aligned with Reference::truth
};

TrialData make_trial(const RunConfig& cfg, const Reference& ref, int trial);

struct FilterRun {
  std::vector<double> t;
  std::vector<StateVector> estimates;  ///< posterior at t[k], k >= 1
  FilterDiagnostics diag;
  double seconds = 0.0;
};

/// Folds the filter over the trial from the configured initial belief.
FilterRun run_filter(const RunConfig& cfg, const FilterSpec& spec,
                     const TrialData& trial);

/// Errors of each estimate against truth: north/east/down in metres, velocities in m/s,
/// attitude in degrees with yaw and roll wrapped.
Eigen::MatrixXd error_series(const FilterRun& run, const Reference& ref, const EarthModel& earth);

}  // namespace uwnav::harness
