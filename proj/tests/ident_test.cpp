#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "fodsid/error.hpp"
#include "fodsid/ident.hpp"
#include "fodsid/linalg.hpp"
#include "fodsid/sim.hpp"

using namespace fodsid;

namespace {

FracSystem scalar_example(double sigma = 0.0) {
  return FracSystem::make(Vector::Constant(1, 0.5), Matrix::Constant(1, 1, 0.2), std::nullopt, sigma);
}

double svd_norm(const Matrix& m) {
  return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

TEST(AugmentedStates, ZeroPadsBeforeStart) {
  Matrix x(3, 1);
  x << 1, 2, 3;
  const Matrix xt = augmented_states(x, 2);
  Matrix expected(3, 2);
  expected << 1, 0, 2, 1, 3, 2;
  EXPECT_EQ(xt, expected);
}

TEST(OlsFit, NoiselessRecoveryScalarExample) {
  const AugmentedSystem aug = augment(scalar_example(), 2);
  const Trajectory t = simulate_augmented(aug, Vector::Ones(1), 50, {1, 0}, 0.0);
  const OlsEstimate full = ols_fit(t, 2);
  EXPECT_LE(operator_norm_error(full, aug), 1e-8);
  EXPECT_EQ(full.K_used, 50);
  EXPECT_EQ(full.rank, 2);
  EXPECT_FALSE(full.degenerate);
  EXPECT_LT(full.residual_rss, 1e-20);
  EXPECT_EQ(full.mode, OlsMode::autonomous);

  const OlsEstimate structured = ols_fit(t, 2, {.structured = true});
  EXPECT_LE(operator_norm_error(structured, aug), 1e-8);
  EXPECT_EQ(structured.mode, OlsMode::structured);
  EXPECT_EQ(structured.Atilde_hat(1, 0), 1.0);
  EXPECT_EQ(structured.Atilde_hat(1, 1), 0.0);
}

TEST(OlsFit, NoiselessRecoveryMultichannel) {
  Matrix A(2, 2);
  A << 0.1, -0.2, 0.3, -0.4;
  const AugmentedSystem aug = augment(FracSystem::make(Vector{{0.4, 0.8}}, A), 3);
  const Trajectory t = simulate_augmented(aug, Vector{{1.0, -0.5}}, 80, {0, 0}, 0.0);
  for (bool discard : {false, true}) {
    const OlsEstimate est = ols_fit(t, 3, {.structured = true, .discard_initial = discard});
    EXPECT_LE(operator_norm_error(est, aug), 1e-8) << discard;
    EXPECT_EQ(est.K_used, discard ? 78 : 80);
  }
}

TEST(OlsFit, ZeroTrajectoryGivesZeroEstimate) {
  const Trajectory t = simulate_augmented(augment(scalar_example(), 2), Vector::Zero(1), 20, {0, 0}, 0.0);
  const OlsEstimate est = ols_fit(t, 2);
  EXPECT_TRUE(est.Atilde_hat.isZero(0.0));
  EXPECT_TRUE(est.degenerate);
  EXPECT_EQ(est.rank, 0);
}

TEST(OlsFit, ResidualOrthogonalToRegressors) {
  const AugmentedSystem aug = augment(scalar_example(0.3), 3);
  const Trajectory t = simulate_augmented(aug, Vector::Ones(1), 400, {4, 0}, 0.3);
  const OlsEstimate est = ols_fit(t, 3);
  const Matrix xt = augmented_states(t.states, 3);
  const Matrix X = xt.topRows(400);
  const Matrix Y = xt.bottomRows(400);
  const Matrix R = Y - X * est.Atilde_hat.transpose();
  EXPECT_LT((X.transpose() * R).cwiseAbs().maxCoeff(), 1e-9 * X.squaredNorm());
  EXPECT_NEAR(R.squaredNorm(), est.residual_rss, 1e-9 * est.residual_rss);
  // Shifted rows are exact identities of the regressor, so the fit reproduces them.
  EXPECT_NEAR(est.Atilde_hat(1, 0), 1.0, 1e-9);
  EXPECT_NEAR(est.Atilde_hat(2, 1), 1.0, 1e-9);
}

TEST(OlsFit, StructuredMatchesFullTopRow) {
  const AugmentedSystem aug = augment(scalar_example(0.5), 2);
  const Trajectory t = simulate_augmented(aug, Vector::Ones(1), 300, {2, 0}, 0.5);
  const OlsEstimate full = ols_fit(t, 2);
  const OlsEstimate st = ols_fit(t, 2, {.structured = true});
  EXPECT_LT((full.Atilde_hat.topRows(1) - st.Atilde_hat.topRows(1)).norm(), 1e-12);
  EXPECT_LE(operator_norm_error(st, aug), operator_norm_error(full, aug) + 1e-12);
}

TEST(OlsFit, ErrorShrinksWithK) {
  const AugmentedSystem aug = augment(scalar_example(0.1), 2);
  std::vector<double> short_err, long_err;
  for (std::uint32_t s = 0; s < 50; ++s) {
    short_err.push_back(operator_norm_error(
        ols_fit(simulate_augmented(aug, Vector::Ones(1), 250, {99, s}, 0.1), 2), aug));
    long_err.push_back(operator_norm_error(
        ols_fit(simulate_augmented(aug, Vector::Ones(1), 4000, {99, s}, 0.1), 2), aug));
  }
  EXPECT_LT(median(long_err), median(short_err));
}

TEST(OlsFit, RejectsShortTrajectory) {
  const Trajectory t = simulate_exact(scalar_example(), Vector::Ones(1), 1, {0, 0});
  EXPECT_THROW(ols_fit(t, 2), DomainError);
  const Trajectory ok = simulate_exact(scalar_example(), Vector::Ones(1), 5, {0, 0});
  EXPECT_THROW(ols_fit(ok, 0), DomainError);
  EXPECT_THROW(ols_fit_with_inputs(ok, 2, Matrix::Zero(2, 1)), ConfigError);
}

TEST(OlsFitWithInputs, RecoversNoiselessInputDrivenSystem) {
  const FracSystem sys = FracSystem::make(Vector::Constant(1, 0.5), Matrix::Constant(1, 1, 0.2),
                                          Matrix::Ones(1, 1));
  const AugmentedSystem aug = augment(sys, 2);
  const Matrix u = draw_inputs({6, 0}, 60, 1, 1.0);
  const Trajectory t = simulate_augmented(aug, Vector::Zero(1), 60, {6, 0}, 0.0, u);
  const OlsEstimate est = ols_fit_with_inputs(t, 2, *aug.Btilde);
  EXPECT_EQ(est.mode, OlsMode::with_inputs);
  EXPECT_LE(operator_norm_error(est, aug), 1e-8);
  EXPECT_THROW(ols_fit_with_inputs(t, 2, Matrix::Zero(3, 1)), DomainError);
}

TEST(OlsFitWithInputs, ReducesToAutonomousFit) {
  const AugmentedSystem aug = augment(scalar_example(0.4), 2);
  Trajectory t = simulate_augmented(aug, Vector::Ones(1), 200, {5, 0}, 0.4);
  const OlsEstimate plain = ols_fit(t, 2);

  // Zero input matrix with arbitrary inputs.
  t.inputs = draw_inputs({5, 0}, 200, 1, 1.0);
  const OlsEstimate zero_b = ols_fit_with_inputs(t, 2, Matrix::Zero(2, 1));
  EXPECT_LT((zero_b.Atilde_hat - plain.Atilde_hat).norm(), 1e-12);

  // Nonzero input matrix with all-zero inputs.
  t.inputs = Matrix::Zero(200, 1);
  const OlsEstimate zero_u = ols_fit_with_inputs(t, 2, Matrix::Ones(2, 1));
  EXPECT_LT((zero_u.Atilde_hat - plain.Atilde_hat).norm(), 1e-12);
}

TEST(OperatorNorm, KnownMatrices) {
  Matrix diag = Matrix::Zero(2, 2);
  diag(0, 0) = 0.3;
  diag(1, 1) = -0.5;
  EXPECT_NEAR(operator_norm(diag), 0.5, 1e-12);
  Matrix nil = Matrix::Zero(2, 2);
  nil(0, 1) = 1.0;
  EXPECT_NEAR(operator_norm(nil), 1.0, 1e-12);
  EXPECT_EQ(operator_norm(Matrix::Zero(3, 3)), 0.0);
  EXPECT_THROW(operator_norm_error(Matrix::Zero(2, 2), Matrix::Zero(2, 3)), DomainError);
}

TEST(OperatorNorm, AgreesWithSvd) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 50; ++trial) {
    const int r = 1 + trial % 6;
    const int c = 1 + (trial / 6) % 6;
    const Matrix m = Matrix::NullaryExpr(r, c, [&] { return g(rng); });
    const double ref = svd_norm(m);
    EXPECT_NEAR(operator_norm(m), ref, 1e-8 * ref) << r << "x" << c;
  }
}

TEST(SubmatrixErrors, BlocksNeverExceedFullError) {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 3;
    const int p = 1 + (trial / 3) % 4;
    const int d = n * p;
    const Matrix truth = Matrix::NullaryExpr(d, d, [&] { return g(rng); });
    const Matrix est = truth + 0.1 * Matrix::NullaryExpr(d, d, [&] { return g(rng); });
    const SubmatrixErrorReport rep = submatrix_error_report(est, truth, n);
    ASSERT_EQ(rep.block_errors.size(), static_cast<std::size_t>(p));
    const double full = svd_norm(est - truth);
    for (int bi = 0; bi < p; ++bi) {
      for (int bj = 0; bj < p; ++bj) {
        EXPECT_LE(svd_norm((est - truth).block(bi * n, bj * n, n, n)), full * (1 + 1e-12));
      }
    }
  }
}
