#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "uwnav/error.hpp"
#include "uwnav/mcc.hpp"

using namespace uwnav;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MatrixXd random_lower(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  MatrixXd s = MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) s(i, j) = d(rng);
    s(i, i) = std::abs(d(rng)) + 0.5;
  }
  return s;
}

MeasurementModel identity_model(double r) {
  return {[](const VectorXd& x) -> VectorXd { return x; }, VectorXd::Constant(1, r), {}, {}};
}

struct ScalarOracle {
  double mean = 0.0;
  double var = 0.0;
  int iterations = 0;
};

// Fixed-point iteration for x ~ N(0, 1), y = x + v, v ~ N(0, 1), written out by hand.
ScalarOracle scalar_fpi(double y, double sigma, double eps, int i_max, double floor) {
  const auto kern = [&](double e) { return std::max(std::exp(-e * e / (2 * sigma * sigma)), floor); };
  double x = y / 2.0;
  double k = 0.5, pi_p = 1.0, r_bar = 1.0;
  int it = 0;
  for (int i = 1; i <= i_max; ++i) {
    it = i;
    pi_p = kern(-x);
    r_bar = 1.0 / kern(y - x);
    k = 1.0 / (1.0 + r_bar);
    const double next = k * y;
    const double change = std::abs(next - x) / std::abs(x);
    x = next;
    if (change <= eps) break;
  }
  return {x, 1.0 / pi_p - k * (1.0 + r_bar) * k, it};
}

const std::vector<EngineConfig> kEngines = {
    {FilterKind::UKF, std::nullopt, BasisMode::Orthonormal},
    {FilterKind::CKF, std::nullopt, BasisMode::Orthonormal},
    {FilterKind::PCKF, std::nullopt, BasisMode::Orthonormal},
};

}  // namespace

TEST(Kernel, Values) {
  EXPECT_DOUBLE_EQ(gaussian_kernel(0.0, 2.0), 1.0);
  EXPECT_NEAR(gaussian_kernel(2.0, 2.0), std::exp(-0.5), 1e-15);
  EXPECT_NEAR(gaussian_kernel(2.0, 2.0), 0.60653, 1e-5);
  EXPECT_DOUBLE_EQ(gaussian_kernel(-1.3, 0.7), gaussian_kernel(1.3, 0.7));
}

TEST(WeightedErrors, Examples) {
  const SqrtBelief prior{VectorXd::Constant(1, 1.0), MatrixXd::Constant(1, 1, 2.0)};
  const MatrixXd sr = MatrixXd::Identity(1, 1);
  const VectorXd zero = weighted_errors(prior.mean, prior, VectorXd::Constant(1, 3.0),
                                        VectorXd::Constant(1, 3.0), sr);
  EXPECT_EQ(zero, VectorXd::Zero(2));
  const VectorXd e = weighted_errors(VectorXd::Constant(1, 5.0), prior, VectorXd::Constant(1, 3.0),
                                     VectorXd::Constant(1, 1.0), sr);
  EXPECT_DOUBLE_EQ(e(0), -2.0);
  EXPECT_DOUBLE_EQ(e(1), 2.0);
  const SqrtBelief unit{VectorXd::Zero(2), MatrixXd::Identity(2, 2)};
  const VectorXd raw = weighted_errors(VectorXd::Constant(2, 0.5), unit, VectorXd::Constant(2, 1.5),
                                       VectorXd::Constant(2, 1.0), MatrixXd::Identity(2, 2));
  EXPECT_EQ(raw, VectorXd::Constant(4, 0.5).cwiseProduct((VectorXd(4) << -1, -1, 1, 1).finished()));
}

TEST(WeightedErrors, WrapsAngularResiduals) {
  const SqrtBelief prior{VectorXd::Constant(1, 3.1), MatrixXd::Identity(1, 1)};
  const VectorXd e = weighted_errors(VectorXd::Constant(1, -3.1), prior, VectorXd::Constant(1, 3.1),
                                     VectorXd::Constant(1, -3.1), MatrixXd::Identity(1, 1), {0}, {0});
  EXPECT_LT(e.cwiseAbs().maxCoeff(), 0.1);
}

TEST(WeightedErrors, SingularFactor) {
  const SqrtBelief prior{VectorXd::Zero(1), MatrixXd::Zero(1, 1)};
  try {
    weighted_errors(VectorXd::Ones(1), prior, VectorXd::Ones(1), VectorXd::Zero(1),
                    MatrixXd::Identity(1, 1));
    FAIL();
  } catch (const NavError& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularFactor);
  }
}

TEST(Weights, ZeroLargeBandwidthAndFloor) {
  MccConfig cfg;
  const CorrentropyWeights w0 = correntropy_weights(VectorXd::Zero(5), 2, cfg);
  EXPECT_EQ(w0.pi_p, VectorXd::Ones(2));
  EXPECT_EQ(w0.pi_r, VectorXd::Ones(3));
  cfg.sigma = 1e8;
  const VectorXd e = (VectorXd(3) << 10.0, -300.0, 5.0).finished();
  const CorrentropyWeights wl = correntropy_weights(e, 1, cfg);
  EXPECT_GE(wl.pi_p.minCoeff(), 1.0 - 1e-8);
  EXPECT_GE(wl.pi_r.minCoeff(), 1.0 - 1e-8);
  cfg.sigma = 2.0;
  const CorrentropyWeights wf = correntropy_weights(VectorXd::Constant(1, 20.0), 0, cfg);
  EXPECT_EQ(wf.pi_r(0), cfg.pi_floor);
}

TEST(Weights, MonotoneDownWeighting) {
  MccConfig cfg;
  double prev = 2.0;
  for (double r = 0.0; r < 10.0; r += 0.25) {
    const CorrentropyWeights w = correntropy_weights((VectorXd(3) << 0.3, r, -1.0).finished(), 1, cfg);
    EXPECT_LE(w.pi_r(0), prev);
    EXPECT_DOUBLE_EQ(w.pi_r(1), gaussian_kernel(-1.0, cfg.sigma));
    prev = w.pi_r(0);
  }
}

TEST(ModifiedFactors, Examples) {
  CorrentropyWeights unit{VectorXd::Ones(1), VectorXd::Ones(1)};
  const auto [s1, r1] = modified_sqrt_factors(MatrixXd::Identity(1, 1), MatrixXd::Identity(1, 1), unit);
  EXPECT_DOUBLE_EQ(s1(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(r1(0, 0), 1.0);
  CorrentropyWeights quarter{VectorXd::Constant(1, 0.25), VectorXd::Constant(1, 0.25)};
  const auto [s2, r2] = modified_sqrt_factors(MatrixXd::Identity(1, 1), MatrixXd::Identity(1, 1), quarter);
  EXPECT_DOUBLE_EQ(s2(0, 0), 2.0);
  EXPECT_DOUBLE_EQ((s2 * s2.transpose())(0, 0), 4.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  const MatrixXd s = random_lower(9, rng);
  const MatrixXd sr = random_lower(4, rng);
  CorrentropyWeights w{VectorXd::NullaryExpr(9, [&] { return u(rng); }),
                       VectorXd::NullaryExpr(4, [&] { return u(rng); })};
  const auto [sb, srb] = modified_sqrt_factors(s, sr, w);
  EXPECT_LT((sb * sb.transpose() - s * w.pi_p.cwiseInverse().asDiagonal() * s.transpose()).norm(), 1e-12);
  EXPECT_LT((srb * srb.transpose() - sr * w.pi_r.cwiseInverse().asDiagonal() * sr.transpose()).norm(), 1e-12);
}

TEST(McUpdate, LargeBandwidthIsMse) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> d(0.0, 1.0);
  const int n = 4;
  const SqrtBelief prior{VectorXd::NullaryExpr(n, [&] { return d(rng); }), random_lower(n, rng)};
  const MeasurementModel m{[](const VectorXd& x) -> VectorXd {
                             return (VectorXd(3) << x(0) + x(1), std::sin(x(2)), x(3) * x(3)).finished();
                           },
                           (VectorXd(3) << 0.5, 0.2, 1.0).finished(), {}, {}};
  const VectorXd y = (VectorXd(3) << 3.0, 0.1, -2.0).finished();
  MccConfig cfg;
  cfg.sigma = 1e8;
  for (const auto& e : kEngines) {
    const SqrtBelief mse = update(prior, y, m, e);
    const MccResult mc = mc_update(prior, y, m, e, cfg, nullptr);
    EXPECT_LT((mc.posterior.mean - mse.mean).norm(), 1e-8);
    EXPECT_LT((mc.posterior.cov() - mse.cov()).norm(), 1e-8);
  }
}

TEST(McUpdate, ZeroInnovationOneIteration) {
  const SqrtBelief prior{VectorXd::Constant(1, 0.7), MatrixXd::Identity(1, 1)};
  FilterDiagnostics diag;
  for (const auto& e : kEngines) {
    const MccResult r = mc_update(prior, VectorXd::Constant(1, 0.7), identity_model(1.0), e, {}, &diag);
    EXPECT_EQ(r.iterations, 1);
    EXPECT_TRUE(r.converged);
    EXPECT_DOUBLE_EQ(r.posterior.mean(0), 0.7);
  }
  EXPECT_EQ(diag.mc_steps, 3);
  EXPECT_EQ(diag.mc_iterations, 3);
}

TEST(McUpdate, ScalarOracle) {
  const SqrtBelief prior{VectorXd::Zero(1), MatrixXd::Identity(1, 1)};
  MccConfig cfg;
  const ScalarOracle o = scalar_fpi(10.0, cfg.sigma, cfg.epsilon, cfg.i_max, cfg.pi_floor);
  for (const auto& e : kEngines) {
    const MccResult r = mc_update(prior, VectorXd::Constant(1, 10.0), identity_model(1.0), e, cfg, nullptr);
    EXPECT_NEAR(r.posterior.mean(0), o.mean, 1e-10);
    EXPECT_NEAR(r.posterior.cov()(0, 0), o.var, 1e-10);
    EXPECT_EQ(r.iterations, o.iterations);
    EXPECT_LT(std::abs(r.posterior.mean(0)), 5.0);
  }
}

TEST(McUpdate, OutlierIsDownWeighted) {
  const SqrtBelief prior{VectorXd::Zero(1), MatrixXd::Identity(1, 1)};
  MccConfig cfg;
  double prev = 0.0;
  for (double y : {1.0, 2.0, 3.0}) {
    const MccResult r = mc_update(prior, VectorXd::Constant(1, y), identity_model(1.0), kEngines[2], cfg, nullptr);
    EXPECT_LT(r.posterior.mean(0), y / 2.0 + 1e-12);
    EXPECT_GT(r.posterior.mean(0), prev);
    prev = r.posterior.mean(0);
  }
  const MccResult far = mc_update(prior, VectorXd::Constant(1, 50.0), identity_model(1.0), kEngines[2], cfg, nullptr);
  EXPECT_LT(std::abs(far.posterior.mean(0)), 1e-3);
}

TEST(McUpdate, Deterministic) {
  const SqrtBelief prior{VectorXd::Zero(1), MatrixXd::Identity(1, 1)};
  const MccResult a = mc_update(prior, VectorXd::Constant(1, 4.0), identity_model(1.0), kEngines[0], {}, nullptr);
  const MccResult b = mc_update(prior, VectorXd::Constant(1, 4.0), identity_model(1.0), kEngines[0], {}, nullptr);
  EXPECT_EQ(a.posterior.mean, b.posterior.mean);
  EXPECT_EQ(a.posterior.sqrt_cov, b.posterior.sqrt_cov);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(McConfig, Validation) {
  MccConfig cfg;
  cfg.sigma = 0.0;
  EXPECT_THROW(cfg.validate(), NavError);
  cfg = MccConfig{};
  cfg.i_max = 0;
  EXPECT_THROW(cfg.validate(), NavError);
}
