#include <cmath>

#include "uwnav/error.hpp"
#include "uwnav/filters.hpp"
#include "uwnav/geodesy.hpp"

namespace uwnav {

namespace {

constexpr double kVarianceFloor = 1e-15;

double ukf_kappa(const EngineConfig& e, int n) { return e.kappa.value_or(3.0 - n); }

PointSet sigma_points(const EngineConfig& e, int n) {
  if (e.kind == FilterKind::UKF) return ukf_points(n, ukf_kappa(e, n));
  return ckf_points(n);
}

Eigen::MatrixXd evaluate(const VectorFn& fn, const Eigen::MatrixXd& points,
                         const std::vector<int>& angular) {
  Eigen::VectorXd first = fn(points.col(0));
  Eigen::MatrixXd out(first.size(), points.cols());
  out.col(0) = first;
  for (Eigen::Index j = 1; j < points.cols(); ++j) out.col(j) = fn(points.col(j));
  unwrap_columns(out, angular);
  return out;
}

// Weighted deviations split by weight sign. Columns with negative weight are returned
// through `negative`; at most one such column is supported.
void weighted_deviations(const Eigen::MatrixXd& values, const Eigen::VectorXd& w,
                         const Eigen::VectorXd& center, Eigen::MatrixXd& positive,
                         std::optional<Eigen::VectorXd>& negative) {
  const Eigen::Index cnt = (w.array() > 0.0).count();
  positive.resize(values.rows(), cnt);
  negative.reset();
  Eigen::Index c = 0;
  for (Eigen::Index j = 0; j < values.cols(); ++j) {
    if (w(j) > 0.0) {
      positive.col(c++) = std::sqrt(w(j)) * (values.col(j) - center);
    } else if (w(j) < 0.0) {
      if (negative) throw NavError(ErrorCode::InvalidSpread, "more than one negative weight");
      negative = std::sqrt(-w(j)) * (values.col(j) - center);
    }
  }
}

Eigen::MatrixXd diag_sqrt(const Eigen::VectorXd& r) {
  return r.cwiseMax(kVarianceFloor).cwiseSqrt().asDiagonal();
}

}  // namespace

void unwrap_columns(Eigen::MatrixXd& values, const std::vector<int>& angular) {
  for (int a : angular) {
    const double ref = values(a, 0);
    for (Eigen::Index j = 1; j < values.cols(); ++j) {
      values(a, j) = ref + wrap_angle(values(a, j) - ref);
    }
  }
}

void wrap_components(Eigen::Ref<Eigen::VectorXd> v, const std::vector<int>& angular) {
  for (int a : angular) v(a) = wrap_angle(v(a));
}

Eigen::MatrixXd MeasurementMoments::pyy_noise_free() const {
  Eigen::MatrixXd p = meas_dev * meas_dev.transpose();
  if (downdate) p -= *downdate * downdate->transpose();
  return p;
}

SqrtBelief predict(const SqrtBelief& belief, const ProcessModel& model, const EngineConfig& engine,
                   FilterDiagnostics* diag) {
  const int n = belief.dim();
  SqrtBelief out;
  if (engine.kind == FilterKind::PCKF) {
    const CollocationSet cs = collocation_points(n);
    const HermiteBasis basis = hermite_basis(cs, engine.basis);
    const Eigen::MatrixXd pts = (belief.sqrt_cov * cs.xi).colwise() + belief.mean;
    const Eigen::MatrixXd vals = evaluate(model.f, pts, model.angular);
    const CoefficientMatrix a = fit_coefficients(vals, basis);
    out.mean = a.a_hat.col(0);
    Eigen::MatrixXd u(n, 2 * n + model.sqrt_q.cols());
    u << a.a_hat.rightCols(2 * n), model.sqrt_q;
    out.sqrt_cov = qr_sqrt(u);
  } else {
    const PointSet ps = sigma_points(engine, n);
    const Eigen::MatrixXd pts = (belief.sqrt_cov * ps.xi).colwise() + belief.mean;
    const Eigen::MatrixXd vals = evaluate(model.f, pts, model.angular);
    out.mean = vals * ps.weights;
    Eigen::MatrixXd dev;
    std::optional<Eigen::VectorXd> neg;
    weighted_deviations(vals, ps.weights, out.mean, dev, neg);
    Eigen::MatrixXd u(n, dev.cols() + model.sqrt_q.cols());
    u << dev, model.sqrt_q;
    out.sqrt_cov = qr_sqrt(u);
    if (neg) {
      Eigen::MatrixXd s = out.sqrt_cov;
      if (chol_rank1(s, *neg, -1.0)) {
        out.sqrt_cov = s;
      } else if (diag) {
        ++diag->factorization_failures;
      }
    }
  }
  wrap_components(out.mean, model.angular);
  return out;
}

MeasurementMoments measurement_moments(const SqrtBelief& prior, const MeasurementModel& model,
                                       const EngineConfig& engine) {
  const int n = prior.dim();
  MeasurementMoments mm;
  if (engine.kind == FilterKind::PCKF) {
    const CollocationSet cs = collocation_points(n);
    const HermiteBasis basis = hermite_basis(cs, engine.basis);
    const Eigen::MatrixXd pts = (prior.sqrt_cov * cs.xi).colwise() + prior.mean;
    const Eigen::MatrixXd vals = evaluate(model.h, pts, model.angular);
    const CoefficientMatrix b = fit_coefficients(vals, basis);
    mm.y_pred = b.a_hat.col(0);
    mm.meas_dev = b.a_hat.rightCols(2 * n);
    mm.state_dev = Eigen::MatrixXd::Zero(n, 2 * n);
    mm.state_dev.leftCols(n) = prior.sqrt_cov;
  } else {
    const PointSet ps = sigma_points(engine, n);
    const Eigen::MatrixXd offsets = prior.sqrt_cov * ps.xi;
    const Eigen::MatrixXd pts = offsets.colwise() + prior.mean;
    const Eigen::MatrixXd vals = evaluate(model.h, pts, model.angular);
    mm.y_pred = vals * ps.weights;
    weighted_deviations(vals, ps.weights, mm.y_pred, mm.meas_dev, mm.downdate);
    std::optional<Eigen::VectorXd> unused;
    weighted_deviations(pts, ps.weights, prior.mean, mm.state_dev, unused);
  }
  wrap_components(mm.y_pred, model.angular);
  return mm;
}

Eigen::MatrixXd kalman_gain(const MeasurementMoments& mm, const Eigen::VectorXd& r_eff) {
  Eigen::MatrixXd pyy = mm.pyy_noise_free();
  pyy.diagonal() += r_eff.cwiseMax(kVarianceFloor);
  Eigen::LLT<Eigen::MatrixXd> llt(pyy);
  if (llt.info() != Eigen::Success) {
    throw NavError(ErrorCode::NonPositiveInnovation, "innovation covariance is not positive definite");
  }
  return llt.solve(mm.pxy().transpose()).transpose();
}

Eigen::MatrixXd posterior_sqrt(const Eigen::MatrixXd& prior_sqrt, const Eigen::VectorXd& pi_p,
                               const MeasurementMoments& mm, const Eigen::MatrixXd& gain,
                               const Eigen::VectorXd& r_eff, FilterDiagnostics* diag) {
  const Eigen::Index n = prior_sqrt.rows();
  const Eigen::Index inflate = pi_p.size() > 0 ? n : 0;
  Eigen::MatrixXd u(n, inflate + mm.state_dev.cols() + gain.cols());
  if (inflate > 0) {
    const Eigen::VectorXd extra = (pi_p.cwiseInverse().array() - 1.0).max(0.0).sqrt().matrix();
    u.leftCols(n) = prior_sqrt * extra.asDiagonal();
  }
  u.middleCols(inflate, mm.state_dev.cols()) = mm.state_dev - gain * mm.meas_dev;
  u.rightCols(gain.cols()) = gain * diag_sqrt(r_eff);
  Eigen::MatrixXd s = qr_sqrt(u);
  if (mm.downdate) {
    Eigen::MatrixXd down = s;
    if (chol_rank1(down, gain * *mm.downdate, -1.0)) {
      s = down;
    } else if (diag) {
      ++diag->factorization_failures;
    }
  }
  return s;
}

SqrtBelief mse_update(const SqrtBelief& prior, const MeasurementMoments& mm,
                      const Eigen::VectorXd& y, const MeasurementModel& model,
                      FilterDiagnostics* diag) {
  const Eigen::MatrixXd k = kalman_gain(mm, model.r_diag);
  Eigen::VectorXd innov = y - mm.y_pred;
  wrap_components(innov, model.angular);
  SqrtBelief post;
  post.mean = prior.mean + k * innov;
  wrap_components(post.mean, model.state_angular);
  post.sqrt_cov = posterior_sqrt(prior.sqrt_cov, Eigen::VectorXd(), mm, k, model.r_diag, diag);
  return post;
}

SqrtBelief update(const SqrtBelief& prior, const Eigen::VectorXd& y,
                  const MeasurementModel& model, const EngineConfig& engine,
                  FilterDiagnostics* diag) {
  return mse_update(prior, measurement_moments(prior, model, engine), y, model, diag);
}

}  // namespace uwnav
