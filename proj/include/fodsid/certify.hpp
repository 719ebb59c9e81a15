#ifndef FODSID_CERTIFY_HPP
#define FODSID_CERTIFY_HPP

#include <string_view>
#include <vector>

#include "fodsid/core.hpp"

namespace fodsid {

/// W_t = sum_{j=0}^{t-1} A^j (A^j)^T, accumulated as M <- A M, W <- W + M M^T.
Matrix gramian(const Matrix& Atilde, int t);

/// W_t^B = sum_{j=1}^{t} A^{t-j} B B^T (A^{t-j})^T.
Matrix gramian_input(const Matrix& Atilde, const Matrix& Btilde, int t);

enum class GramianKind { noise, input };

/// W_1 .. W_{t_max}; values[t-1] holds W_t.
struct GramianSeries {
  int t_max = 0;
  GramianKind kind = GramianKind::noise;
  std::vector<Matrix> values;

  const Matrix& at(int t) const { return values.at(static_cast<std::size_t>(t - 1)); }
};

GramianSeries gramian_series(const Matrix& Atilde, int t_max);
GramianSeries gramian_input_series(const Matrix& Atilde, const Matrix& Btilde, int t_max);

/// Gramian used in the small-ball term: W_k, or W_{floor(k/2)}.
enum class GramianIndex { k, half_k };

std::string_view to_string(GramianIndex g);
GramianIndex gramian_index_from_string(std::string_view s);

/**
 * Universal constants of the certificates.
 *
 * The defaults come from the underlying martingale small-ball argument with
 * small-ball probability p = 3/20: C = 90 / p = 600 (multiplied by sigma
 * when sigma_in_C is set) and c = 10 / p^2 = 4000 / 9.
 */
struct BoundConstants {
  double C_const = 600.0;
  double c_const = 4000.0 / 9.0;
  GramianIndex gramian_index = GramianIndex::k;
  bool sigma_in_C = true;
};

enum class BoundVariant { autonomous, with_inputs };

std::string_view to_string(BoundVariant v);

struct BoundCertificate {
  BoundVariant variant = BoundVariant::autonomous;
  int d = 0;
  int K = 0;
  int k = 0;
  double delta = 0.0;
  double sigma = 0.0;
  double sigma_u = 0.0;
  BoundConstants constants;
  double lambda_min_Wk = 0.0;
  /// log det(W_K W_k^{-1}); autonomous variant only.
  double logdet_ratio = 0.0;
  /// tr(sigma^2 W_K + sigma_u^2 W_K^B); input variant only.
  double trace_WK = 0.0;
  /// The logarithmic factor under the square root, also the burn-in right-hand side / c.
  double log_term = 0.0;
  double bound_value = 0.0;
  bool burn_in_satisfied = false;
  /// False when the small-ball Gramian is numerically singular.
  bool valid = true;
};

/**
 * Evaluates
 *
 *   ||A_hat - A~||_op <= C / sqrt(K lambda_min(W_k)) * sqrt(d log(d/delta) + log det(W_K W_k^{-1}))
 *
 * together with the burn-in condition K / k >= c (d log(d/delta) + log det(W_K W_k^{-1})).
 * An unmet burn-in is reported, never thrown. Throws DomainError unless
 * 0 < delta < 1/2 and 1 <= k <= K.
 */
BoundCertificate evaluate_bound(const Matrix& Atilde, int K, int k, double delta, double sigma,
                                const BoundConstants& constants = {});

/// Input-excited variant, mixing sigma^2 W + sigma_u^2 W^B:
///
///   C sigma^2 / sqrt(K lambda) * sqrt(d log(tr(M_K) / (delta lambda))),  lambda = lambda_min(M_k).
///
/// Burn-in: K / k >= c d log(tr(M_K) / (delta lambda)).
BoundCertificate evaluate_bound_with_inputs(const Matrix& Atilde, const Matrix& Btilde, int K,
                                            int k, double delta, double sigma, double sigma_u,
                                            const BoundConstants& constants = {});

/// Per-horizon scalars of the noise Gramian, t = 1..t_max (index t-1).
struct GramianProfile {
  std::vector<double> lambda_min;
  std::vector<double> logdet;  // NaN where W_t is not numerically positive definite
  std::vector<double> trace;
};

GramianProfile gramian_profile(const Matrix& Atilde, int t_max);

/// Smallest k in [k_min, K] meeting the burn-in condition at horizon K, or
/// 0 if none does.
int smallest_burn_in_k(const GramianProfile& profile, int d, int K, int k_min, double delta,
                       const BoundConstants& constants);

}  // namespace fodsid

#endif  // FODSID_CERTIFY_HPP
