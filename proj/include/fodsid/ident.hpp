#ifndef FODSID_IDENT_HPP
#define FODSID_IDENT_HPP

#include <string_view>
#include <vector>

#include "fodsid/core.hpp"
#include "fodsid/sim.hpp"

namespace fodsid {

enum class OlsMode { autonomous, with_inputs, structured };

std::string_view to_string(OlsMode mode);
OlsMode ols_mode_from_string(std::string_view s);

struct OlsOptions {
  /// Regress only the unknown top block row [A_0 ... A_{p-1}] and fill the
  /// shift structure in exactly. Off by default: the full d x d matrix is estimated.
  bool structured = false;
  /// Drop the first p-1 transitions instead of zero-padding their regressors.
  bool discard_initial = false;
};

struct OlsEstimate {
  Matrix Atilde_hat;
  int p = 1;
  int n = 1;
  double residual_rss = 0.0;
  double regressor_min_singular_value = 0.0;
  int K_used = 0;
  int rank = 0;
  OlsMode mode = OlsMode::autonomous;
  /// Regressors rank deficient; Atilde_hat is the minimum-norm solution.
  bool degenerate = false;

  int d() const { return n * p; }
};

/// Augmented regressors x~[k] = [x[k]; ...; x[k-p+1]] for k = first..K, one
/// per row, with x[j] = 0 for j < 0.
Matrix augmented_states(const Matrix& states, int p);

/**
 * Least-squares estimate of A~ from one trajectory,
 *
 *   argmin_A  sum_k 1/2 || x~[k+1] - A x~[k] ||^2,
 *
 * over every transition k = 0..K-1 (or p-1..K-1 with discard_initial). Solved
 * by a complete orthogonal decomposition of the regressor matrix, which
 * yields the minimum-norm minimizer when the regressors are rank deficient.
 * Throws DomainError if the trajectory has fewer than 2 transitions.
 */
OlsEstimate ols_fit(const Trajectory& traj, int p, const OlsOptions& options = {});

/// As ols_fit, with the known B~ u[k] subtracted from every target.
/// Throws ConfigError if the trajectory carries no inputs.
OlsEstimate ols_fit_with_inputs(const Trajectory& traj, int p, const Matrix& Btilde,
                                const OlsOptions& options = {});

/// ||A_hat - A~||_op by power iteration.
double operator_norm_error(const OlsEstimate& estimate, const AugmentedSystem& truth);
double operator_norm_error(const Matrix& estimate, const Matrix& truth);

struct SubmatrixErrorReport {
  std::vector<double> block_errors;  // ||A_hat_j - A_j||_op, j = 0..p-1
  double full_error = 0.0;
};

/// Per-lag errors of the top block row. Every entry is checked against the
/// full-matrix error; a violation throws std::logic_error.
SubmatrixErrorReport submatrix_error_report(const OlsEstimate& estimate,
                                            const AugmentedSystem& truth);
SubmatrixErrorReport submatrix_error_report(const Matrix& estimate, const Matrix& truth, int n);

}  // namespace fodsid

#endif  // FODSID_IDENT_HPP
