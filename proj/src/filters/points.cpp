#include <cmath>
#include <string>

#include "uwnav/error.hpp"
#include "uwnav/filters.hpp"

namespace uwnav {

PointSet ukf_points(int n, double kappa) {
  if (n < 1) throw NavError(ErrorCode::InvalidArgument, "point set dimension must be positive");
  if (!(n + kappa > 0.0)) {
    throw NavError(ErrorCode::InvalidSpread, "n + kappa must be positive, got " +
                                                 std::to_string(n + kappa));
  }
  const double spread = std::sqrt(n + kappa);
  PointSet ps;
  ps.xi = Eigen::MatrixXd::Zero(n, 2 * n + 1);
  ps.weights = Eigen::VectorXd::Constant(2 * n + 1, 1.0 / (2.0 * (n + kappa)));
  ps.weights(0) = kappa / (n + kappa);
  for (int i = 0; i < n; ++i) {
    ps.xi(i, 1 + i) = spread;
    ps.xi(i, 1 + n + i) = -spread;
  }
  return ps;
}

PointSet ckf_points(int n) {
  if (n < 1) throw NavError(ErrorCode::InvalidArgument, "point set dimension must be positive");
  const double spread = std::sqrt(static_cast<double>(n));
  PointSet ps;
  ps.xi = Eigen::MatrixXd::Zero(n, 2 * n);
  ps.weights = Eigen::VectorXd::Constant(2 * n, 1.0 / (2.0 * n));
  for (int i = 0; i < n; ++i) {
    ps.xi(i, i) = spread;
    ps.xi(i, n + i) = -spread;
  }
  return ps;
}

CollocationSet collocation_points(int n) {
  if (n < 1) throw NavError(ErrorCode::InvalidArgument, "collocation dimension must be positive");
  const double r3 = std::sqrt(3.0);
  CollocationSet cs;
  cs.xi = Eigen::MatrixXd::Zero(n, 2 * n + 1);
  for (int i = 0; i < n; ++i) {
    cs.xi(i, i) = -r3;
    cs.xi(i, n + 1 + i) = r3;
  }
  return cs;
}

HermiteBasis hermite_basis(const CollocationSet& cs, BasisMode mode) {
  const Eigen::Index n = cs.xi.rows();
  const Eigen::Index np = cs.xi.cols();
  if (np != 2 * n + 1) {
    throw NavError(ErrorCode::SingularBasis, "collocation set must have 2n+1 points");
  }
  const double h2_scale = mode == BasisMode::Orthonormal ? 1.0 / std::sqrt(2.0) : 1.0;
  HermiteBasis hb;
  hb.mode = mode;
  hb.h_hat.resize(np, np);
  hb.h_hat.row(0).setOnes();
  hb.h_hat.middleRows(1, n) = cs.xi;
  hb.h_hat.bottomRows(n) = (cs.xi.array().square() - 1.0).matrix() * h2_scale;
  hb.lu.compute(hb.h_hat);
  const double rcond = hb.lu.rcond();
  if (!(rcond > 1e-12)) {
    throw NavError(ErrorCode::SingularBasis, "Hermite basis matrix is singular");
  }
  return hb;
}

CoefficientMatrix fit_coefficients(const Eigen::MatrixXd& values, const HermiteBasis& basis) {
  if (values.cols() != basis.h_hat.cols()) {
    throw NavError(ErrorCode::MismatchedLengths, "values must have one column per collocation point");
  }
  // values = A H  <=>  H^T A^T = values^T
  Eigen::MatrixXd at = basis.lu.transpose().solve(values.transpose());
  return {at.transpose()};
}

}  // namespace uwnav
