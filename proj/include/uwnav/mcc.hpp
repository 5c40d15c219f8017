#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "uwnav/filters.hpp"

namespace uwnav {

struct MccConfig {
  double sigma = 2.0;      ///< kernel bandwidth in weighted-error units
  double epsilon = 1e-6;   ///< relative change that ends the iteration
  int i_max = 20;
  double pi_floor = 1e-12;

  /// Throws NavError(Config) on out-of-range fields.
  void validate() const;
};

/// Diagonals of the correntropy matrix for the state and measurement blocks.
struct CorrentropyWeights {
  Eigen::VectorXd pi_p;
  Eigen::VectorXd pi_r;
};

/// exp(-e^2 / (2 sigma^2))
double gaussian_kernel(double e, double sigma);

/// [-S^-1 (x - x_prior); S_R^-1 (y - h(x))] with the listed components wrapped before
/// weighting. S and S_R are lower-triangular. Throws SingularFactor on a zero pivot.
Eigen::VectorXd weighted_errors(const Eigen::VectorXd& x_candidate, const SqrtBelief& prior,
                                const Eigen::VectorXd& y, const Eigen::VectorXd& y_pred_at_candidate,
                                const Eigen::MatrixXd& s_r,
                                const std::vector<int>& state_angular = {},
                                const std::vector<int>& meas_angular = {});

/// Kernel of each error entry floored at cfg.pi_floor; the first n entries form pi_p.
CorrentropyWeights correntropy_weights(const Eigen::VectorXd& errors, int n, const MccConfig& cfg);

/// (S diag(pi_p)^-1/2, S_R diag(pi_r)^-1/2)
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> modified_sqrt_factors(const Eigen::MatrixXd& s,
                                                                  const Eigen::MatrixXd& s_r,
                                                                  const CorrentropyWeights& w);

struct MccResult {
  SqrtBelief posterior;
  int iterations = 0;
  bool converged = false;
  CorrentropyWeights weights;
};

/// Maximum-correntropy update by fixed-point iteration around the given engine. The
/// measurement statistics are computed once from the unmodified prior and the iterate
/// starts at the engine's MSE posterior mean. Hitting i_max returns the last iterate
/// with converged = false.
MccResult mc_update(const SqrtBelief& prior, const Eigen::VectorXd& y,
                    const MeasurementModel& model, const EngineConfig& engine,
                    const MccConfig& cfg, FilterDiagnostics* diag = nullptr);

}  // namespace uwnav
