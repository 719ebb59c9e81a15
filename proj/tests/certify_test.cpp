#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "fodsid/campaign.hpp"
#include "fodsid/certify.hpp"
#include "fodsid/error.hpp"
#include "fodsid/linalg.hpp"

using namespace fodsid;

namespace {

Matrix scalar_atilde() {
  Matrix a(2, 2);
  a << 0.7, 0.125, 1.0, 0.0;
  return a;
}

Matrix scalar_btilde() {
  Matrix b(2, 1);
  b << 1.0, 0.0;
  return b;
}

FracSystem scalar_example(double sigma) {
  return FracSystem::make(Vector::Constant(1, 0.5), Matrix::Constant(1, 1, 0.2), std::nullopt, sigma);
}

}  // namespace

TEST(Gramian, HandComputedScalarExample) {
  const Matrix A = scalar_atilde();
  EXPECT_LT((gramian(A, 1) - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-12);
  Matrix w2(2, 2);
  w2 << 1.505625, 0.7, 0.7, 2.0;
  EXPECT_LT((gramian(A, 2) - w2).cwiseAbs().maxCoeff(), 1e-12);

  const Matrix B = scalar_btilde();
  Matrix wb1(2, 2);
  wb1 << 1.0, 0.0, 0.0, 0.0;
  Matrix wb2(2, 2);
  wb2 << 1.49, 0.7, 0.7, 1.0;
  EXPECT_LT((gramian_input(A, B, 1) - wb1).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((gramian_input(A, B, 2) - wb2).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Gramian, SeriesMatchesDirectSums) {
  const Matrix A = scalar_atilde();
  const Matrix B = scalar_btilde();
  const GramianSeries s = gramian_series(A, 30);
  const GramianSeries sb = gramian_input_series(A, B, 30);
  for (int t = 1; t <= 30; ++t) {
    Matrix w = Matrix::Zero(2, 2);
    Matrix wb = Matrix::Zero(2, 2);
    for (int j = 0; j < t; ++j) {
      Matrix Aj = Matrix::Identity(2, 2);
      for (int i = 0; i < j; ++i) Aj = Aj * A;
      w += Aj * Aj.transpose();
      wb += Aj * B * B.transpose() * Aj.transpose();
    }
    EXPECT_LT((s.at(t) - w).norm(), 1e-11 * w.norm()) << t;
    EXPECT_LT((sb.at(t) - wb).norm(), 1e-11 * wb.norm()) << t;
    EXPECT_LT((gramian(A, t) - w).norm(), 1e-11 * w.norm()) << t;
  }
  EXPECT_THROW(gramian(A, 0), DomainError);
  EXPECT_THROW(gramian_input(A, Matrix::Ones(3, 1), 2), DomainError);
}

TEST(Gramian, MonotoneInHorizon) {
  const GramianProfile prof = gramian_profile(scalar_atilde(), 50);
  for (std::size_t t = 1; t < 50; ++t) {
    EXPECT_GE(prof.lambda_min[t], prof.lambda_min[t - 1] - 1e-12) << t;
    EXPECT_GE(prof.trace[t], prof.trace[t - 1]) << t;
    EXPECT_GE(prof.logdet[t], prof.logdet[t - 1] - 1e-12) << t;
  }
}

TEST(Gramian, ProfileLogdetMatchesEigenvalues) {
  const Matrix A = scalar_atilde();
  const GramianProfile prof = gramian_profile(A, 20);
  for (int t = 1; t <= 20; ++t) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(gramian(A, t));
    const double ref = es.eigenvalues().array().log().sum();
    EXPECT_NEAR(prof.logdet[static_cast<std::size_t>(t - 1)], ref, 1e-10) << t;
  }
}

TEST(SpectralRadius, ScalarExample) {
  const SpectralRadius sr = spectral_radius(scalar_atilde());
  EXPECT_NEAR(sr.rho, (0.7 + std::sqrt(0.99)) / 2.0, 1e-12);
  EXPECT_TRUE(sr.marginally_stable);
  EXPECT_FALSE(spectral_radius(2.0 * scalar_atilde()).marginally_stable);
}

// Frozen from tests/oracles/certify_oracle.py.
TEST(EvaluateBound, MatchesNumpyOracle) {
  const BoundCertificate c = evaluate_bound(scalar_atilde(), 2000, 100, 0.1, 1.0);
  ASSERT_TRUE(c.valid);
  EXPECT_NEAR(c.lambda_min_Wk, 1.0193062392819798, 1e-10);
  EXPECT_NEAR(c.logdet_ratio, 0.0, 1e-10);
  EXPECT_NEAR(c.bound_value, 32.527479226428035, 1e-8);
  EXPECT_FALSE(c.burn_in_satisfied);
  EXPECT_EQ(c.d, 2);
}

TEST(EvaluateBound, WithInputsMatchesNumpyOracle) {
  const BoundCertificate c =
      evaluate_bound_with_inputs(scalar_atilde(), scalar_btilde(), 2000, 100, 0.1, 1.0, 1.0);
  ASSERT_TRUE(c.valid);
  EXPECT_EQ(c.variant, BoundVariant::with_inputs);
  EXPECT_NEAR(c.lambda_min_Wk, 1.6101776344206513, 1e-10);
  EXPECT_NEAR(c.trace_WK, 12.37566137566138, 1e-9);
  EXPECT_NEAR(c.bound_value, 31.15716122927906, 1e-8);
  EXPECT_FALSE(c.burn_in_satisfied);
}

TEST(EvaluateBound, NonIncreasingInK) {
  const double expected[] = {9.2002, 6.5055, 4.6001, 3.2527, 2.3000};
  const int grid[] = {250, 500, 1000, 2000, 4000};
  double prev = INFINITY;
  for (int i = 0; i < 5; ++i) {
    const double b = evaluate_bound(scalar_atilde(), grid[i], 100, 0.1, 0.1).bound_value;
    EXPECT_NEAR(b, expected[i], 1e-4) << grid[i];
    EXPECT_LE(b, prev);
    prev = b;
  }
}

TEST(EvaluateBound, ScalesWithSigmaOnlyWhenConfigured) {
  const Matrix A = scalar_atilde();
  const double b1 = evaluate_bound(A, 500, 10, 0.1, 1.0).bound_value;
  EXPECT_NEAR(evaluate_bound(A, 500, 10, 0.1, 0.25).bound_value, 0.25 * b1, 1e-12 * b1);
  BoundConstants raw;
  raw.sigma_in_C = false;
  EXPECT_EQ(evaluate_bound(A, 500, 10, 0.1, 0.25, raw).bound_value, b1);
}

TEST(EvaluateBound, ZeroDynamicsAndFullHorizon) {
  const Matrix zero = Matrix::Zero(3, 3);
  const BoundCertificate c = evaluate_bound(zero, 100, 5, 0.1, 1.0);
  EXPECT_EQ(c.lambda_min_Wk, 1.0);
  EXPECT_EQ(c.logdet_ratio, 0.0);
  EXPECT_NEAR(c.log_term, 3.0 * std::log(30.0), 1e-12);

  const BoundCertificate full = evaluate_bound(scalar_atilde(), 300, 300, 0.1, 1.0);
  EXPECT_EQ(full.logdet_ratio, 0.0);
  EXPECT_FALSE(full.burn_in_satisfied);
}

TEST(EvaluateBound, BurnInSatisfiedForLongHorizons) {
  const BoundCertificate c = evaluate_bound(Matrix::Zero(1, 1), 20000, 1, 0.1, 1.0);
  // c * log(10) is about 1023.
  EXPECT_TRUE(c.burn_in_satisfied);
  EXPECT_FALSE(evaluate_bound(Matrix::Zero(1, 1), 1000, 1, 0.1, 1.0).burn_in_satisfied);
}

TEST(EvaluateBound, RejectsBadArguments) {
  const Matrix A = scalar_atilde();
  for (double delta : {0.0, 0.5, 0.7, -0.1}) {
    EXPECT_THROW(evaluate_bound(A, 100, 10, delta, 1.0), DomainError) << delta;
  }
  EXPECT_THROW(evaluate_bound(A, 100, 0, 0.1, 1.0), DomainError);
  EXPECT_THROW(evaluate_bound(A, 100, 101, 0.1, 1.0), DomainError);
  EXPECT_THROW(evaluate_bound(A, 100, 10, 0.1, -1.0), DomainError);
  EXPECT_THROW(evaluate_bound(Matrix::Zero(2, 3), 100, 10, 0.1, 1.0), DomainError);
}

TEST(EvaluateBound, HalfIndexFlagsTrivialK) {
  BoundConstants half;
  half.gramian_index = GramianIndex::half_k;
  const BoundCertificate c = evaluate_bound(scalar_atilde(), 100, 1, 0.1, 1.0, half);
  EXPECT_FALSE(c.valid);
  EXPECT_TRUE(std::isinf(c.bound_value));
  const BoundCertificate c4 = evaluate_bound(scalar_atilde(), 100, 4, 0.1, 1.0, half);
  EXPECT_TRUE(c4.valid);
  EXPECT_NEAR(c4.lambda_min_Wk, evaluate_bound(scalar_atilde(), 100, 2, 0.1, 1.0).lambda_min_Wk,
              1e-15);
  EXPECT_EQ(gramian_index_from_string("half_k"), GramianIndex::half_k);
  EXPECT_THROW(gramian_index_from_string("k2"), ConfigError);
}

TEST(SmallestBurnIn, AgreesWithEvaluateBound) {
  const Matrix zero = Matrix::Zero(1, 1);
  const GramianProfile prof = gramian_profile(zero, 5000);
  const BoundConstants bc;
  const int k = smallest_burn_in_k(prof, 1, 5000, 1, 0.1, bc);
  ASSERT_GT(k, 0);
  EXPECT_TRUE(evaluate_bound(zero, 5000, k, 0.1, 1.0).burn_in_satisfied);
  if (k > 1) EXPECT_FALSE(evaluate_bound(zero, 5000, k - 1, 0.1, 1.0).burn_in_satisfied);
  const GramianProfile scalar = gramian_profile(scalar_atilde(), 4000);
  EXPECT_EQ(smallest_burn_in_k(scalar, 2, 4000, 2, 0.1, bc), 0);
}

TEST(Quantile, LinearInterpolationIgnoringNaN) {
  EXPECT_DOUBLE_EQ(quantile({3.0, 1.0, 2.0, NAN}, 0.5), 2.0);
  EXPECT_DOUBLE_EQ(quantile({1.0, 2.0, 3.0, 4.0}, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile({0.0, 10.0}, 0.9), 9.0);
  EXPECT_TRUE(std::isnan(quantile({NAN}, 0.5)));
}

TEST(Campaign, NoiselessErrorsVanish) {
  CampaignConfig cc;
  cc.system = scalar_example(0.0);
  cc.K_list = {50, 100};
  cc.trials = 4;
  cc.threads = 2;
  const CampaignResult r = monte_carlo_campaign(cc);
  ASSERT_EQ(r.rows.size(), 2u);
  for (const auto& row : r.rows) {
    EXPECT_EQ(row.failed_trials, 0);
    for (double e : row.errors) EXPECT_LE(e, 1e-8);
  }
}

TEST(Campaign, IndependentOfThreadCount) {
  CampaignConfig cc;
  cc.system = scalar_example(0.1);
  cc.K_list = {100, 200};
  cc.trials = 12;
  cc.master_seed = 31;
  std::string csv[3];
  const int threads[] = {1, 3, 8};
  for (int i = 0; i < 3; ++i) {
    cc.threads = threads[i];
    std::ostringstream os;
    write_campaign_csv(os, monte_carlo_campaign(cc));
    csv[i] = os.str();
  }
  EXPECT_EQ(csv[0], csv[1]);
  EXPECT_EQ(csv[0], csv[2]);
  EXPECT_EQ(csv[0].rfind("K,k,median_err,p90_err,bound,coverage,burn_in,failed_trials\n", 0), 0u);
}

TEST(Campaign, FallsBackToDimensionWithoutBurnIn) {
  CampaignConfig cc;
  cc.system = scalar_example(0.1);
  cc.K_list = {250};
  cc.trials = 5;
  const CampaignResult r = monte_carlo_campaign(cc);
  EXPECT_EQ(r.rows[0].k, 2);
  EXPECT_FALSE(r.rows[0].burn_in);
  EXPECT_DOUBLE_EQ(r.rows[0].bound,
                   evaluate_bound(augment(cc.system, 2).Atilde, 250, 2, 0.1, 0.1).bound_value);
}

TEST(Campaign, WarnsWhenUnstable) {
  CampaignConfig cc;
  cc.system = FracSystem::make(Vector::Constant(1, 0.5), Matrix::Constant(1, 1, 1.0), std::nullopt, 0.1);
  cc.K_list = {20};
  cc.trials = 2;
  const CampaignResult r = monte_carlo_campaign(cc);
  EXPECT_GT(r.spectral.rho, 1.0);
  std::ostringstream os;
  write_campaign_csv(os, r);
  EXPECT_EQ(os.str().rfind("# warning:", 0), 0u);
}

TEST(LogLogSlope, RecoversPowerLaw) {
  std::vector<CampaignRow> rows;
  for (int K : {100, 400, 1600}) {
    CampaignRow r;
    r.K = K;
    r.median_err = 3.0 / std::sqrt(K);
    rows.push_back(r);
  }
  EXPECT_NEAR(loglog_slope(rows), -0.5, 1e-12);
}
