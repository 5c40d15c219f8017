#include "uwnav/mcc.hpp"

#include <cmath>

#include "uwnav/error.hpp"

namespace uwnav {

void MccConfig::validate() const {
  if (!(sigma > 0.0)) throw NavError(ErrorCode::Config, "kernel bandwidth must be positive");
  if (!(epsilon > 0.0)) throw NavError(ErrorCode::Config, "epsilon must be positive");
  if (i_max < 1) throw NavError(ErrorCode::Config, "i_max must be at least 1");
  if (!(pi_floor > 0.0 && pi_floor <= 1.0)) {
    throw NavError(ErrorCode::Config, "pi_floor must lie in (0, 1]");
  }
}

double gaussian_kernel(double e, double sigma) { return std::exp(-e * e / (2.0 * sigma * sigma)); }

namespace {

Eigen::VectorXd lower_solve(const Eigen::MatrixXd& l, const Eigen::VectorXd& b) {
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    if (l(i, i) == 0.0) throw NavError(ErrorCode::SingularFactor, "zero pivot in square-root factor");
  }
  return l.triangularView<Eigen::Lower>().solve(b);
}

}  // namespace

Eigen::VectorXd weighted_errors(const Eigen::VectorXd& x_candidate, const SqrtBelief& prior,
                                const Eigen::VectorXd& y, const Eigen::VectorXd& y_pred_at_candidate,
                                const Eigen::MatrixXd& s_r, const std::vector<int>& state_angular,
                                const std::vector<int>& meas_angular) {
  Eigen::VectorXd dx = x_candidate - prior.mean;
  wrap_components(dx, state_angular);
  Eigen::VectorXd dy = y - y_pred_at_candidate;
  wrap_components(dy, meas_angular);
  Eigen::VectorXd e(dx.size() + dy.size());
  e.head(dx.size()) = -lower_solve(prior.sqrt_cov, dx);
  e.tail(dy.size()) = lower_solve(s_r, dy);
  return e;
}

CorrentropyWeights correntropy_weights(const Eigen::VectorXd& errors, int n, const MccConfig& cfg) {
  Eigen::VectorXd pi(errors.size());
  for (Eigen::Index i = 0; i < errors.size(); ++i) {
    pi(i) = std::max(gaussian_kernel(errors(i), cfg.sigma), cfg.pi_floor);
  }
  return {pi.head(n), pi.tail(errors.size() - n)};
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> modified_sqrt_factors(const Eigen::MatrixXd& s,
                                                                  const Eigen::MatrixXd& s_r,
                                                                  const CorrentropyWeights& w) {
  return {s * w.pi_p.cwiseSqrt().cwiseInverse().asDiagonal(),
          s_r * w.pi_r.cwiseSqrt().cwiseInverse().asDiagonal()};
}

MccResult mc_update(const SqrtBelief& prior, const Eigen::VectorXd& y,
                    const MeasurementModel& model, const EngineConfig& engine,
                    const MccConfig& cfg, FilterDiagnostics* diag) {
  cfg.validate();
  const int n = prior.dim();
  const MeasurementMoments mm = measurement_moments(prior, model, engine);
  const Eigen::VectorXd r = model.r_diag.cwiseMax(1e-15);
  const Eigen::MatrixXd s_r = r.cwiseSqrt().asDiagonal();
  Eigen::VectorXd innov = y - mm.y_pred;
  wrap_components(innov, model.angular);

  Eigen::MatrixXd k = kalman_gain(mm, r);
  Eigen::VectorXd x = prior.mean + k * innov;
  wrap_components(x, model.state_angular);

  MccResult res;
  Eigen::VectorXd r_bar = r;
  for (int i = 1; i <= cfg.i_max; ++i) {
    res.iterations = i;
    const Eigen::VectorXd e =
        weighted_errors(x, prior, y, model.h(x), s_r, model.state_angular, model.angular);
    res.weights = correntropy_weights(e, n, cfg);
    r_bar = r.cwiseQuotient(res.weights.pi_r);
    k = kalman_gain(mm, r_bar);
    Eigen::VectorXd x_next = prior.mean + k * innov;
    wrap_components(x_next, model.state_angular);
    Eigen::VectorXd dx = x_next - x;
    wrap_components(dx, model.state_angular);
    const double scale = x.norm();
    const double change = scale > 0.0 ? dx.norm() / scale : dx.norm();
    x = x_next;
    if (change <= cfg.epsilon) {
      res.converged = true;
      break;
    }
  }

  res.posterior.mean = x;
  res.posterior.sqrt_cov = posterior_sqrt(prior.sqrt_cov, res.weights.pi_p, mm, k, r_bar, diag);
  if (diag) {
    ++diag->mc_steps;
    diag->mc_iterations += res.iterations;
    if (!res.converged) ++diag->mc_nonconverged;
  }
  return res;
}

}  // namespace uwnav
