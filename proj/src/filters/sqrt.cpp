#include <cmath>

#include "uwnav/filters.hpp"

namespace uwnav {

bool SqrtBelief::valid() const {
  const Eigen::Index n = mean.size();
  if (sqrt_cov.rows() != n || sqrt_cov.cols() != n) return false;
  if (!mean.allFinite() || !sqrt_cov.allFinite()) return false;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (sqrt_cov(i, i) < 0.0) return false;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (sqrt_cov(i, j) != 0.0) return false;
    }
  }
  return true;
}

Eigen::MatrixXd qr_sqrt(const Eigen::MatrixXd& U) {
  const Eigen::Index n = U.rows();
  const Eigen::Index p = std::max(U.cols(), n);
  Eigen::MatrixXd ut = Eigen::MatrixXd::Zero(p, n);
  ut.topRows(U.cols()) = U.transpose();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(ut);
  Eigen::MatrixXd S =
      qr.matrixQR().topRows(n).triangularView<Eigen::Upper>().toDenseMatrix().transpose();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (S(i, i) < 0.0) S.col(i) = -S.col(i);
  }
  return S;
}

bool chol_rank1(Eigen::MatrixXd& S, Eigen::VectorXd v, double sign) {
  const Eigen::Index n = S.rows();
  if (sign > 0.0) {
    Eigen::MatrixXd u(n, n + 1);
    u << S, v;
    S = qr_sqrt(u);
    return true;
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    const double skk = S(k, k);
    const double r2 = skk * skk - v(k) * v(k);
    if (skk == 0.0 && v(k) == 0.0) continue;
    if (!(r2 > 0.0)) return false;
    const double r = std::sqrt(r2);
    const double c = r / skk;
    const double s = v(k) / skk;
    S(k, k) = r;
    for (Eigen::Index i = k + 1; i < n; ++i) {
      S(i, k) = (S(i, k) - s * v(i)) / c;
      v(i) = c * v(i) - s * S(i, k);
    }
  }
  return true;
}

}  // namespace uwnav
