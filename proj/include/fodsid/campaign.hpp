#ifndef FODSID_CAMPAIGN_HPP
#define FODSID_CAMPAIGN_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fodsid/certify.hpp"
#include "fodsid/core.hpp"
#include "fodsid/ident.hpp"
#include "fodsid/linalg.hpp"

namespace fodsid {

struct CampaignConfig {
  FracSystem system;
  int p = 2;
  std::vector<int> K_list;
  int trials = 100;
  double delta = 0.1;
  BoundConstants constants;
  std::uint64_t master_seed = 0;
  int threads = 0;  // 0: hardware concurrency
  /// Initial state of every trial; empty means all ones.
  Vector x0;
  OlsOptions ols;
  A0Convention convention = A0Convention::derivation;
};

struct CampaignRow {
  int K = 0;
  int k = 0;
  double median_err = 0.0;
  double p90_err = 0.0;
  double bound = 0.0;
  double coverage = 0.0;  // over successful trials
  bool burn_in = false;
  int failed_trials = 0;
  std::vector<double> errors;  // per trial, NaN for failed ones
  std::vector<std::string> failures;
};

struct CampaignResult {
  std::vector<CampaignRow> rows;
  SpectralRadius spectral;
};

/**
 * Monte-Carlo check of the autonomous certificate.
 *
 * For every K, `trials` trajectories of the p-augmented system are simulated
 * from [x0; 0], identified by OLS and scored by ||A_hat - A~||_op. Trial t of
 * the i-th horizon draws its noise from stream i * trials + t of master_seed,
 * and results are reduced by trial index, so the table does not depend on the
 * worker count. The bound uses the smallest k >= d meeting the burn-in
 * condition; if none does, k = min(d, K) and burn_in is reported false.
 */
CampaignResult monte_carlo_campaign(const CampaignConfig& config);

/// Linear-interpolation quantile (NaNs ignored); NaN if nothing remains.
double quantile(std::vector<double> values, double q);

/// Least-squares slope of log(median_err) against log(K).
double loglog_slope(const std::vector<CampaignRow>& rows);

/// `K,k,median_err,p90_err,bound,coverage,burn_in,failed_trials`, preceded by a
/// `# warning:` line when the spectral radius exceeds 1 + 1e-8.
void write_campaign_csv(std::ostream& os, const CampaignResult& result);

}  // namespace fodsid

#endif  // FODSID_CAMPAIGN_HPP
