#include "fodsid/ident.hpp"

#include <stdexcept>
#include <string>

#include <spdlog/spdlog.h>

#include "fodsid/error.hpp"
#include "fodsid/linalg.hpp"

namespace fodsid {

std::string_view to_string(OlsMode mode) {
  switch (mode) {
    case OlsMode::autonomous: return "autonomous";
    case OlsMode::with_inputs: return "with_inputs";
    case OlsMode::structured: return "structured";
  }
  return "autonomous";
}

OlsMode ols_mode_from_string(std::string_view s) {
  if (s == "autonomous" || s == "full") return OlsMode::autonomous;
  if (s == "with_inputs") return OlsMode::with_inputs;
  if (s == "structured") return OlsMode::structured;
  throw ConfigError("unknown OLS mode '" + std::string(s) + "'");
}

Matrix augmented_states(const Matrix& states, int p) {
  const auto rows = states.rows();
  const auto n = states.cols();
  Matrix xt = Matrix::Zero(rows, n * p);
  for (Eigen::Index k = 0; k < rows; ++k) {
    for (int lag = 0; lag < p && lag <= k; ++lag) {
      xt.block(k, lag * n, 1, n) = states.row(k - lag);
    }
  }
  return xt;
}

namespace {

OlsEstimate fit(const Trajectory& traj, int p, const Matrix* Btilde, const OlsOptions& options) {
  if (p < 1) throw DomainError("ols: truncation length p must be >= 1");
  if (traj.K() < 2) {
    throw DomainError("ols: trajectory needs at least 2 transitions, got " +
                      std::to_string(std::max(traj.K(), 0)));
  }
  const int n = traj.n();
  const int d = n * p;
  const int first = options.discard_initial ? p - 1 : 0;
  const int rows = traj.K() - first;
  if (rows < 1) throw DomainError("ols: no transitions left after discarding the first p-1");
  if (rows < d + 1) {
    spdlog::warn("ols: {} regression rows for {} unknowns per output; estimate is underdetermined",
                 rows, d);
  }

  const Matrix xt = augmented_states(traj.states, p);
  const Matrix X = xt.middleRows(first, rows);
  const int target_cols = options.structured ? n : d;
  Matrix Y = xt.middleRows(first + 1, rows).leftCols(target_cols);
  if (Btilde) {
    if (!traj.inputs) throw ConfigError("ols_fit_with_inputs: trajectory carries no inputs");
    if (Btilde->rows() != d || Btilde->cols() != traj.inputs->cols()) {
      throw DomainError("ols_fit_with_inputs: B~ must be d x m = " + std::to_string(d) + "x" +
                        std::to_string(traj.inputs->cols()));
    }
    const Matrix U = traj.inputs->middleRows(first, rows);
    Y -= U * Btilde->topRows(target_cols).transpose();
  }

  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(X);
  const Matrix coef = cod.solve(Y);  // d x target_cols, = A_hat^T
  const Matrix residual = Y - X * coef;

  OlsEstimate est;
  est.p = p;
  est.n = n;
  est.K_used = rows;
  est.rank = static_cast<int>(cod.rank());
  est.degenerate = est.rank < d;
  est.residual_rss = residual.squaredNorm();
  if (rows >= d) {
    Eigen::BDCSVD<Matrix> svd(X);
    est.regressor_min_singular_value = svd.singularValues().minCoeff();
  }
  if (options.structured) {
    est.Atilde_hat = companion_from_top_row(coef.transpose(), n);
    est.mode = OlsMode::structured;
  } else {
    est.Atilde_hat = coef.transpose();
    est.mode = Btilde ? OlsMode::with_inputs : OlsMode::autonomous;
  }
  if (est.degenerate) {
    spdlog::warn("ols: regressors have rank {} < {}; returning the minimum-norm solution",
                 est.rank, d);
  }
  return est;
}

}  // namespace

OlsEstimate ols_fit(const Trajectory& traj, int p, const OlsOptions& options) {
  return fit(traj, p, nullptr, options);
}

OlsEstimate ols_fit_with_inputs(const Trajectory& traj, int p, const Matrix& Btilde,
                                const OlsOptions& options) {
  return fit(traj, p, &Btilde, options);
}

double operator_norm_error(const Matrix& estimate, const Matrix& truth) {
  if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols()) {
    throw DomainError("operator_norm_error: estimate is " + std::to_string(estimate.rows()) +
                      "x" + std::to_string(estimate.cols()) + ", truth is " +
                      std::to_string(truth.rows()) + "x" + std::to_string(truth.cols()));
  }
  return operator_norm(estimate - truth);
}

double operator_norm_error(const OlsEstimate& estimate, const AugmentedSystem& truth) {
  return operator_norm_error(estimate.Atilde_hat, truth.Atilde);
}

SubmatrixErrorReport submatrix_error_report(const Matrix& estimate, const Matrix& truth, int n) {
  SubmatrixErrorReport report;
  report.full_error = operator_norm_error(estimate, truth);
  if (n < 1 || truth.rows() % n != 0) throw DomainError("submatrix_error_report: bad block size");
  const auto p = truth.rows() / n;
  const Matrix diff = estimate - truth;
  for (Eigen::Index j = 0; j < p; ++j) {
    const double e = operator_norm(diff.block(0, j * n, n, n));
    // Both sides are power-iteration estimates; allow their stopping tolerance.
    if (e > report.full_error * (1.0 + 1e-9)) {
      throw std::logic_error("submatrix error exceeds full-matrix operator norm error");
    }
    report.block_errors.push_back(e);
  }
  return report;
}

SubmatrixErrorReport submatrix_error_report(const OlsEstimate& estimate,
                                            const AugmentedSystem& truth) {
  return submatrix_error_report(estimate.Atilde_hat, truth.Atilde, truth.n);
}

}  // namespace fodsid
