#include "fodsid/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <spdlog/spdlog.h>

#include "fodsid/error.hpp"
#include "fodsid/io.hpp"
#include "fodsid/parallel.hpp"
#include "fodsid/sim.hpp"

namespace fodsid {

double quantile(std::vector<double> values, double q) {
  std::erase_if(values, [](double v) { return std::isnan(v); });
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

double loglog_slope(const std::vector<CampaignRow>& rows) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (const auto& r : rows) {
    if (!(r.median_err > 0.0)) continue;
    const double x = std::log(static_cast<double>(r.K));
    const double y = std::log(r.median_err);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) return std::numeric_limits<double>::quiet_NaN();
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

CampaignResult monte_carlo_campaign(const CampaignConfig& config) {
  if (config.trials < 1) throw DomainError("monte_carlo_campaign: trials must be >= 1");
  if (config.K_list.empty()) throw DomainError("monte_carlo_campaign: empty K list");
  const AugmentedSystem aug = augment(config.system, config.p, config.convention);
  const int d = aug.d();
  for (int K : config.K_list) {
    if (K < d + 1) {
      throw DomainError("monte_carlo_campaign: every K must be >= d + 1 = " + std::to_string(d + 1));
    }
  }
  const Vector x0 = config.x0.size() == 0 ? Vector::Ones(aug.n) : config.x0;
  if (x0.size() != aug.n) throw DomainError("monte_carlo_campaign: x0 must have n entries");

  CampaignResult result;
  result.spectral = spectral_radius(aug.Atilde);
  if (!result.spectral.marginally_stable) {
    spdlog::warn("spectral radius {} exceeds 1: the certificate's stability hypothesis is violated",
                 result.spectral.rho);
  }

  const int K_max = *std::max_element(config.K_list.begin(), config.K_list.end());
  const GramianProfile profile = gramian_profile(aug.Atilde, K_max);

  const auto trials = static_cast<std::size_t>(config.trials);
  const std::size_t total = config.K_list.size() * trials;
  std::vector<double> errors(total, std::numeric_limits<double>::quiet_NaN());
  std::vector<std::string> failures(total);

  parallel_for(total, config.threads, [&](std::size_t item) {
    const std::size_t ki = item / trials;
    const int K = config.K_list[ki];
    try {
      const NoiseSource source{config.master_seed, static_cast<std::uint32_t>(item)};
      const Trajectory traj = simulate_augmented(aug, x0, K, source, config.system.sigma);
      const OlsEstimate est = ols_fit(traj, config.p, config.ols);
      errors[item] = operator_norm_error(est, aug);
    } catch (const std::exception& e) {
      failures[item] = e.what();
    }
  });

  for (std::size_t ki = 0; ki < config.K_list.size(); ++ki) {
    CampaignRow row;
    row.K = config.K_list[ki];
    const int k_found =
        smallest_burn_in_k(profile, d, row.K, d, config.delta, config.constants);
    row.k = k_found > 0 ? k_found : std::min(d, row.K);
    const BoundCertificate cert =
        evaluate_bound(aug.Atilde, row.K, row.k, config.delta, config.system.sigma, config.constants);
    row.bound = cert.bound_value;
    row.burn_in = k_found > 0 && cert.burn_in_satisfied;

    row.errors.assign(errors.begin() + static_cast<std::ptrdiff_t>(ki * trials),
                      errors.begin() + static_cast<std::ptrdiff_t>((ki + 1) * trials));
    int ok = 0;
    int covered = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      const std::string& f = failures[ki * trials + t];
      if (!f.empty()) {
        ++row.failed_trials;
        row.failures.push_back("trial " + std::to_string(t) + ": " + f);
        continue;
      }
      ++ok;
      if (row.errors[t] <= row.bound) ++covered;
    }
    row.median_err = quantile(row.errors, 0.5);
    row.p90_err = quantile(row.errors, 0.9);
    row.coverage = ok > 0 ? static_cast<double>(covered) / ok
                          : std::numeric_limits<double>::quiet_NaN();
    result.rows.push_back(std::move(row));
  }
  return result;
}

void write_campaign_csv(std::ostream& os, const CampaignResult& result) {
  if (!result.spectral.marginally_stable) {
    os << "# warning: spectral radius " << format_double(result.spectral.rho)
       << " > 1, stability hypothesis violated\n";
  }
  os << "K,k,median_err,p90_err,bound,coverage,burn_in,failed_trials\n";
  for (const auto& r : result.rows) {
    os << r.K << ',' << r.k << ',' << format_double(r.median_err) << ','
       << format_double(r.p90_err) << ',' << format_double(r.bound) << ','
       << format_double(r.coverage) << ',' << (r.burn_in ? "true" : "false") << ','
       << r.failed_trials << '\n';
  }
}

}  // namespace fodsid
