#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "uwnav/harness/config.hpp"
#include "uwnav/harness/runner.hpp"

namespace uwnav::harness {

struct FilterSummary {
  std::string label;
  Eigen::MatrixXd rmse;   ///< steps x 9
  Eigen::VectorXd armse;  ///< 9
  FilterDiagnostics diag;  ///< summed over trials
  double seconds = 0.0;    ///< summed over trials
};

struct RunResult {
  std::vector<double> t;
  std::vector<FilterSummary> filters;
  int mc_runs = 0;
};

/// Runs every configured filter over mc_runs trials. Trials execute concurrently and
/// are reduced in trial order.
RunResult bench(const RunConfig& cfg);

/// Writes armse.csv, rmse_<state>.csv, flops.csv and meta.json into dir.
void write_outputs(const RunResult& res, const RunConfig& cfg, const std::string& dir);

/// Exports of the first trial for the simulate command.
void write_truth_csv(const std::vector<TruthSample>& truth, const std::string& path);
void write_measurements_csv(const std::vector<MeasurementVector>& meas, const std::string& path);
void write_estimates_csv(const FilterRun& run, const std::string& path);

}  // namespace uwnav::harness
