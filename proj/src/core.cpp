#include "fodsid/core.hpp"

#include <cmath>
#include <string>

#include "fodsid/error.hpp"

namespace fodsid {

void FracSystem::validate() const {
  if (A.rows() < 1 || A.rows() != A.cols()) {
    throw DomainError("system matrix A must be square and non-empty, got " +
                      std::to_string(A.rows()) + "x" + std::to_string(A.cols()));
  }
  if (alpha.size() != A.rows()) {
    throw DomainError("alpha has " + std::to_string(alpha.size()) + " entries, expected n = " +
                      std::to_string(A.rows()));
  }
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    if (!(alpha[i] > 0.0) || alpha[i] > kMaxOrder) {
      throw DomainError("fractional order alpha[" + std::to_string(i) + "] = " +
                        std::to_string(alpha[i]) + " outside (0, 2]");
    }
  }
  if (B && B->rows() != A.rows()) {
    throw DomainError("input matrix B must have n = " + std::to_string(A.rows()) + " rows");
  }
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw DomainError("noise level sigma must be finite and non-negative");
  }
  if (!A.allFinite() || (B && !B->allFinite())) {
    throw DomainError("system matrices contain non-finite entries");
  }
}

FracSystem FracSystem::make(Vector alpha, Matrix A, std::optional<Matrix> B, double sigma) {
  FracSystem sys{std::move(alpha), std::move(A), std::move(B), sigma};
  sys.validate();
  return sys;
}

GlWeights gl_weights(double alpha, std::int64_t max_lag) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw DomainError("gl_weights: alpha must be positive, got " + std::to_string(alpha));
  }
  if (max_lag < 0) {
    throw DomainError("gl_weights: max lag must be non-negative, got " + std::to_string(max_lag));
  }
  GlWeights w;
  w.alpha = alpha;
  w.values.resize(static_cast<std::size_t>(max_lag) + 1);
  w.values[0] = 1.0;
  for (std::int64_t j = 1; j <= max_lag; ++j) {
    const auto jd = static_cast<double>(j);
    w.values[j] = w.values[j - 1] * ((jd - 1.0 - alpha) / jd);
  }
  return w;
}

Matrix memory_diagonals(const Vector& alpha, std::int64_t count) {
  Matrix diags = Matrix::Zero(count, alpha.size());
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    const GlWeights w = gl_weights(alpha[i], count + 1);
    for (std::int64_t j = 1; j <= count; ++j) diags(j - 1, i) = -w.values[j + 1];
  }
  return diags;
}

Matrix build_Aj(const FracSystem& system, std::int64_t j, A0Convention convention) {
  if (j < 0) throw DomainError("build_Aj: lag index must be non-negative");
  const int n = system.n();
  if (j == 0) {
    // D(alpha, 1) = diag(psi(alpha_i, 1)) = -diag(alpha).
    Matrix a0 = system.A;
    for (int i = 0; i < n; ++i) {
      const double psi1 = gl_weights(system.alpha[i], 1).values[1];
      a0(i, i) += convention == A0Convention::derivation ? -psi1 : psi1;
    }
    return a0;
  }
  Matrix aj = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) aj(i, i) = -gl_weights(system.alpha[i], j + 1).values[j + 1];
  return aj;
}

Matrix companion_from_top_row(const Matrix& top_row, int n) {
  const auto d = top_row.cols();
  if (n < 1 || top_row.rows() != n || d % n != 0) {
    throw DomainError("companion_from_top_row: top row must be n x (n p)");
  }
  Matrix c = Matrix::Zero(d, d);
  c.topRows(n) = top_row;
  if (d > n) c.bottomLeftCorner(d - n, d - n).setIdentity();
  return c;
}

AugmentedSystem augment(const FracSystem& system, int p, A0Convention convention) {
  if (p < 1) throw DomainError("augment: truncation length p must be >= 1");
  system.validate();
  const int n = system.n();
  AugmentedSystem aug;
  aug.p = p;
  aug.n = n;
  aug.alpha = system.alpha;

  Matrix top(n, static_cast<Eigen::Index>(n) * p);
  top.leftCols(n) = build_Aj(system, 0, convention);
  if (p > 1) {
    const Matrix diags = memory_diagonals(system.alpha, p - 1);
    for (int j = 1; j < p; ++j) {
      top.middleCols(static_cast<Eigen::Index>(j) * n, n) = diags.row(j - 1).asDiagonal();
    }
  }
  aug.Atilde = companion_from_top_row(top, n);

  aug.Btilde_w = Matrix::Zero(aug.d(), n);
  aug.Btilde_w.topRows(n).setIdentity();
  if (system.B) {
    Matrix bt = Matrix::Zero(aug.d(), system.B->cols());
    bt.topRows(n) = *system.B;
    aug.Btilde = std::move(bt);
  }
  return aug;
}

}  // namespace fodsid
