#include "fodsid/certify.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "fodsid/error.hpp"
#include "fodsid/linalg.hpp"

namespace fodsid {
namespace {

void require_square(const Matrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw DomainError(std::string(what) + ": A~ must be square and non-empty");
  }
}

void require_horizon(int t, const char* what) {
  if (t < 1) throw DomainError(std::string(what) + ": horizon t must be >= 1");
}

void require_bound_args(int K, int k, double delta) {
  if (!(delta > 0.0 && delta < 0.5)) {
    throw DomainError("failure probability delta must lie in (0, 1/2), got " +
                      std::to_string(delta));
  }
  if (k < 1 || k > K) {
    throw DomainError("need 1 <= k <= K, got k = " + std::to_string(k) +
                      ", K = " + std::to_string(K));
  }
}

int small_ball_index(int k, GramianIndex g) { return g == GramianIndex::k ? k : k / 2; }

// W_K and W_k differ by a PSD term, so the ratio is non-negative; values that
// come out slightly negative are round-off in the two factorizations.
double clamp_logdet_ratio(double ratio, double scale) {
  if (ratio < 0.0 && -ratio <= 1e-10 * std::max(1.0, std::abs(scale))) return 0.0;
  return ratio;
}

}  // namespace

std::string_view to_string(GramianIndex g) { return g == GramianIndex::k ? "k" : "half_k"; }

GramianIndex gramian_index_from_string(std::string_view s) {
  if (s == "k") return GramianIndex::k;
  if (s == "half_k") return GramianIndex::half_k;
  throw ConfigError("gramian_index must be \"k\" or \"half_k\", got \"" + std::string(s) + "\"");
}

std::string_view to_string(BoundVariant v) {
  return v == BoundVariant::autonomous ? "autonomous" : "with_inputs";
}

Matrix gramian(const Matrix& Atilde, int t) {
  require_square(Atilde, "gramian");
  require_horizon(t, "gramian");
  const auto d = Atilde.rows();
  Matrix M = Matrix::Identity(d, d);
  Matrix W = Matrix::Identity(d, d);
  for (int j = 1; j < t; ++j) {
    M = Atilde * M;
    W.noalias() += M * M.transpose();
  }
  return W;
}

Matrix gramian_input(const Matrix& Atilde, const Matrix& Btilde, int t) {
  require_square(Atilde, "gramian_input");
  require_horizon(t, "gramian_input");
  if (Btilde.rows() != Atilde.rows()) throw DomainError("gramian_input: B~ must have d rows");
  Matrix M = Btilde;
  Matrix W = M * M.transpose();
  for (int j = 1; j < t; ++j) {
    M = Atilde * M;
    W.noalias() += M * M.transpose();
  }
  return W;
}

GramianSeries gramian_series(const Matrix& Atilde, int t_max) {
  require_square(Atilde, "gramian_series");
  require_horizon(t_max, "gramian_series");
  const auto d = Atilde.rows();
  GramianSeries s{t_max, GramianKind::noise, {}};
  s.values.reserve(static_cast<std::size_t>(t_max));
  Matrix M = Matrix::Identity(d, d);
  s.values.push_back(Matrix::Identity(d, d));
  for (int t = 2; t <= t_max; ++t) {
    M = Atilde * M;
    s.values.push_back(s.values.back() + M * M.transpose());
  }
  return s;
}

GramianSeries gramian_input_series(const Matrix& Atilde, const Matrix& Btilde, int t_max) {
  require_square(Atilde, "gramian_input_series");
  require_horizon(t_max, "gramian_input_series");
  if (Btilde.rows() != Atilde.rows()) throw DomainError("gramian_input_series: B~ must have d rows");
  // W_t^B also equals sum_{i=0}^{t-1} A^i B B^T (A^i)^T, so it accumulates like W_t.
  GramianSeries s{t_max, GramianKind::input, {}};
  s.values.reserve(static_cast<std::size_t>(t_max));
  Matrix M = Btilde;
  s.values.push_back(M * M.transpose());
  for (int t = 2; t <= t_max; ++t) {
    M = Atilde * M;
    s.values.push_back(s.values.back() + M * M.transpose());
  }
  return s;
}

BoundCertificate evaluate_bound(const Matrix& Atilde, int K, int k, double delta, double sigma,
                                const BoundConstants& constants) {
  require_square(Atilde, "evaluate_bound");
  require_bound_args(K, k, delta);
  if (!(sigma >= 0.0)) throw DomainError("evaluate_bound: sigma must be non-negative");

  BoundCertificate cert;
  cert.variant = BoundVariant::autonomous;
  cert.d = static_cast<int>(Atilde.rows());
  cert.K = K;
  cert.k = k;
  cert.delta = delta;
  cert.sigma = sigma;
  cert.constants = constants;

  const double d = cert.d;
  const int idx = small_ball_index(k, constants.gramian_index);
  if (idx < 1) {
    cert.valid = false;
    cert.bound_value = std::numeric_limits<double>::infinity();
    return cert;
  }
  const Matrix Wk = gramian(Atilde, idx);
  const Matrix WK = gramian(Atilde, K);
  cert.lambda_min_Wk = lambda_min_sym(Wk);
  const auto ld_k = logdet_spd(Wk);
  const auto ld_K = logdet_spd(WK);
  if (!ld_k || !ld_K || !(cert.lambda_min_Wk > 0.0)) {
    cert.valid = false;
    cert.bound_value = std::numeric_limits<double>::infinity();
    return cert;
  }
  cert.logdet_ratio = clamp_logdet_ratio(*ld_K - *ld_k, *ld_K);
  cert.log_term = d * std::log(d / delta) + cert.logdet_ratio;

  const double C = constants.sigma_in_C ? constants.C_const * sigma : constants.C_const;
  cert.bound_value = C / std::sqrt(K * cert.lambda_min_Wk) * std::sqrt(cert.log_term);
  cert.burn_in_satisfied =
      static_cast<double>(K) / static_cast<double>(k) >= constants.c_const * cert.log_term;
  return cert;
}

BoundCertificate evaluate_bound_with_inputs(const Matrix& Atilde, const Matrix& Btilde, int K,
                                            int k, double delta, double sigma, double sigma_u,
                                            const BoundConstants& constants) {
  require_square(Atilde, "evaluate_bound_with_inputs");
  require_bound_args(K, k, delta);
  if (!(sigma >= 0.0) || !(sigma_u >= 0.0)) {
    throw DomainError("evaluate_bound_with_inputs: sigma and sigma_u must be non-negative");
  }
  if (Btilde.rows() != Atilde.rows()) {
    throw DomainError("evaluate_bound_with_inputs: B~ must have d rows");
  }

  BoundCertificate cert;
  cert.variant = BoundVariant::with_inputs;
  cert.d = static_cast<int>(Atilde.rows());
  cert.K = K;
  cert.k = k;
  cert.delta = delta;
  cert.sigma = sigma;
  cert.sigma_u = sigma_u;
  cert.constants = constants;

  const int idx = small_ball_index(k, constants.gramian_index);
  if (idx < 1) {
    cert.valid = false;
    cert.bound_value = std::numeric_limits<double>::infinity();
    return cert;
  }
  const double s2 = sigma * sigma;
  const double su2 = sigma_u * sigma_u;
  const Matrix Mk = s2 * gramian(Atilde, idx) + su2 * gramian_input(Atilde, Btilde, idx);
  const Matrix MK = s2 * gramian(Atilde, K) + su2 * gramian_input(Atilde, Btilde, K);
  cert.lambda_min_Wk = lambda_min_sym(Mk);
  cert.trace_WK = MK.trace();
  if (!(cert.lambda_min_Wk > 0.0)) {
    cert.valid = false;
    cert.bound_value = std::numeric_limits<double>::infinity();
    return cert;
  }
  const double d = cert.d;
  cert.log_term = d * std::log(cert.trace_WK / (delta * cert.lambda_min_Wk));
  // log det(M_K M_k^{-1}) is reported for comparison with the autonomous form.
  const auto ld_k = logdet_spd(Mk);
  const auto ld_K = logdet_spd(MK);
  if (ld_k && ld_K) cert.logdet_ratio = clamp_logdet_ratio(*ld_K - *ld_k, *ld_K);

  cert.bound_value =
      constants.C_const * s2 / std::sqrt(K * cert.lambda_min_Wk) * std::sqrt(cert.log_term);
  cert.burn_in_satisfied =
      static_cast<double>(K) / static_cast<double>(k) >= constants.c_const * cert.log_term;
  return cert;
}

GramianProfile gramian_profile(const Matrix& Atilde, int t_max) {
  require_square(Atilde, "gramian_profile");
  require_horizon(t_max, "gramian_profile");
  const auto d = Atilde.rows();
  GramianProfile prof;
  prof.lambda_min.reserve(static_cast<std::size_t>(t_max));
  prof.logdet.reserve(static_cast<std::size_t>(t_max));
  prof.trace.reserve(static_cast<std::size_t>(t_max));
  Matrix M = Matrix::Identity(d, d);
  Matrix W = Matrix::Identity(d, d);
  for (int t = 1; t <= t_max; ++t) {
    if (t > 1) {
      M = Atilde * M;
      W.noalias() += M * M.transpose();
    }
    prof.lambda_min.push_back(lambda_min_sym(W));
    prof.logdet.push_back(logdet_spd(W).value_or(std::numeric_limits<double>::quiet_NaN()));
    prof.trace.push_back(W.trace());
  }
  return prof;
}

int smallest_burn_in_k(const GramianProfile& profile, int d, int K, int k_min, double delta,
                       const BoundConstants& constants) {
  if (K < 1 || static_cast<std::size_t>(K) > profile.logdet.size()) {
    throw DomainError("smallest_burn_in_k: profile shorter than horizon K");
  }
  const double ld_K = profile.logdet[static_cast<std::size_t>(K - 1)];
  const double base = d * std::log(d / delta);
  for (int k = std::max(k_min, 1); k <= K; ++k) {
    const int idx = small_ball_index(k, constants.gramian_index);
    if (idx < 1) continue;
    const double ld_k = profile.logdet[static_cast<std::size_t>(idx - 1)];
    if (std::isnan(ld_k) || std::isnan(ld_K)) continue;
    const double term = base + clamp_logdet_ratio(ld_K - ld_k, ld_K);
    if (static_cast<double>(K) / k >= constants.c_const * term) return k;
  }
  return 0;
}

}  // namespace fodsid
