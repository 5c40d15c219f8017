#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

namespace uwnav {

/// Gaussian belief held as a mean and a lower-triangular factor S with P = S S^T.
struct SqrtBelief {
  Eigen::VectorXd mean;
  Eigen::MatrixXd sqrt_cov;

  Eigen::MatrixXd cov() const { return sqrt_cov * sqrt_cov.transpose(); }
  int dim() const { return static_cast<int>(mean.size()); }
  /// True when the factor is square, lower-triangular, finite and has a non-negative diagonal.
  bool valid() const;
};

using VectorFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// x_k = f(x_{k-1}) + w, w ~ N(0, sqrt_q sqrt_q^T). Components listed in `angular`
/// are wrapped to (-pi, pi] in the mean and in residuals.
struct ProcessModel {
  VectorFn f;
  Eigen::MatrixXd sqrt_q;
  std::vector<int> angular;
};

/// y = h(x) + v with diagonal (equivalent) noise variances r_diag. `angular` lists
/// measurement channels and `state_angular` state components wrapped in residuals.
struct MeasurementModel {
  VectorFn h;
  Eigen::VectorXd r_diag;
  std::vector<int> angular;
  std::vector<int> state_angular;
};

/// Q-less QR square root: lower-triangular S with S S^T = U U^T and S_ii >= 0.
Eigen::MatrixXd qr_sqrt(const Eigen::MatrixXd& U);

/// In-place rank-1 update (sign > 0) or downdate (sign < 0) of a lower-triangular factor.
/// Returns false, leaving S unspecified, when a downdate would lose positive definiteness.
bool chol_rank1(Eigen::MatrixXd& S, Eigen::VectorXd v, double sign);

/// Standard-space points with weights; point j is mean + S * xi.col(j).
struct PointSet {
  Eigen::MatrixXd xi;
  Eigen::VectorXd weights;
};

/// 2n+1 points at +-sqrt(n+kappa) with centre weight kappa/(n+kappa).
/// Throws InvalidSpread when n + kappa <= 0.
PointSet ukf_points(int n, double kappa);
/// 2n points at +-sqrt(n), equal weights.
PointSet ckf_points(int n);

/// Roots of the third-order Hermite polynomial along each axis: [diag(-sqrt3) | 0 | diag(sqrt3)].
struct CollocationSet {
  Eigen::MatrixXd xi;
};

CollocationSet collocation_points(int n);

enum class BasisMode { Unnormalized, Orthonormal };

/// Rows are the 2n+1 basis polynomials [1; H1(xi_1..n); H2(xi_1..n)], columns the points.
struct HermiteBasis {
  Eigen::MatrixXd h_hat;
  BasisMode mode = BasisMode::Orthonormal;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
};

/// Throws SingularBasis if the basis matrix is not invertible.
HermiteBasis hermite_basis(const CollocationSet& cs, BasisMode mode);

/// Coefficients A_hat (d x (2n+1)) with values = A_hat * h_hat. Column 0 is the constant
/// term, columns 1..n the linear terms and n+1..2n the quadratic terms.
struct CoefficientMatrix {
  Eigen::MatrixXd a_hat;
};

CoefficientMatrix fit_coefficients(const Eigen::MatrixXd& values, const HermiteBasis& basis);

enum class FilterKind { UKF, CKF, PCKF };

struct EngineConfig {
  FilterKind kind = FilterKind::PCKF;
  std::optional<double> kappa;  ///< UKF spread; 3 - n when unset
  BasisMode basis = BasisMode::Orthonormal;
};

/// Failure counters accumulated over a run.
struct FilterDiagnostics {
  long factorization_failures = 0;
  long skipped_updates = 0;
  long mc_steps = 0;
  long mc_iterations = 0;
  long mc_nonconverged = 0;
};

/// Predicted measurement statistics of a prior, computed once per update.
/// Innovation covariance without noise is meas_dev meas_dev^T - downdate downdate^T and
/// the cross covariance is state_dev meas_dev^T.
struct MeasurementMoments {
  Eigen::VectorXd y_pred;
  Eigen::MatrixXd state_dev;
  Eigen::MatrixXd meas_dev;
  std::optional<Eigen::VectorXd> downdate;

  Eigen::MatrixXd pyy_noise_free() const;
  Eigen::MatrixXd pxy() const { return state_dev * meas_dev.transpose(); }
};

/// Replaces the listed components of each column by the value nearest column 0 modulo 2pi.
void unwrap_columns(Eigen::MatrixXd& values, const std::vector<int>& angular);
/// Wraps the listed components to (-pi, pi].
void wrap_components(Eigen::Ref<Eigen::VectorXd> v, const std::vector<int>& angular);

SqrtBelief predict(const SqrtBelief& belief, const ProcessModel& model, const EngineConfig& engine,
                   FilterDiagnostics* diag = nullptr);

MeasurementMoments measurement_moments(const SqrtBelief& prior, const MeasurementModel& model,
                                       const EngineConfig& engine);

/// Posterior factor of prior_sqrt diag(1/pi - 1)^(1/2) stacked with the Joseph-form
/// terms for gain K and noise factor sqrt(r_eff). pi_p may be empty (all ones).
/// Increments diag->factorization_failures when the UKF downdate fails.
Eigen::MatrixXd posterior_sqrt(const Eigen::MatrixXd& prior_sqrt, const Eigen::VectorXd& pi_p,
                               const MeasurementMoments& mm, const Eigen::MatrixXd& gain,
                               const Eigen::VectorXd& r_eff, FilterDiagnostics* diag);

/// Gain P_xy P_yy^-1 by Cholesky solve. Throws NonPositiveInnovation if P_yy is not
/// positive definite.
Eigen::MatrixXd kalman_gain(const MeasurementMoments& mm, const Eigen::VectorXd& r_eff);

/// Standard minimum-mean-square-error update.
SqrtBelief mse_update(const SqrtBelief& prior, const MeasurementMoments& mm,
                      const Eigen::VectorXd& y, const MeasurementModel& model,
                      FilterDiagnostics* diag = nullptr);

SqrtBelief update(const SqrtBelief& prior, const Eigen::VectorXd& y,
                  const MeasurementModel& model, const EngineConfig& engine,
                  FilterDiagnostics* diag = nullptr);

inline SqrtBelief pckf_predict(const SqrtBelief& b, const ProcessModel& m,
                               BasisMode mode = BasisMode::Orthonormal) {
  return predict(b, m, {FilterKind::PCKF, std::nullopt, mode});
}
inline SqrtBelief pckf_update(const SqrtBelief& b, const Eigen::VectorXd& y,
                              const MeasurementModel& m, BasisMode mode = BasisMode::Orthonormal) {
  return update(b, y, m, {FilterKind::PCKF, std::nullopt, mode});
}
inline SqrtBelief spkf_predict(const SqrtBelief& b, const ProcessModel& m, const EngineConfig& e) {
  return predict(b, m, e);
}
inline SqrtBelief spkf_update(const SqrtBelief& b, const Eigen::VectorXd& y,
                              const MeasurementModel& m, const EngineConfig& e) {
  return update(b, y, m, e);
}

}  // namespace uwnav
