#include "fodsid/linalg.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "fodsid/error.hpp"

namespace fodsid {

double operator_norm(const Matrix& m, double rel_tol) {
  if (m.size() == 0) return 0.0;
  const double fro = m.norm();
  if (fro == 0.0) return 0.0;

  // Deterministic, non-degenerate start: distinct positive entries make it
  // unlikely to be orthogonal to the dominant right singular vector. If it
  // is, the restart loop below tries the canonical basis.
  const auto cols = m.cols();
  auto iterate = [&](Vector v) {
    v.normalize();
    double lambda = 0.0;
    for (int it = 0; it < 100000; ++it) {
      Vector mv = m * v;
      Vector g = m.transpose() * mv;
      const double next = mv.squaredNorm();  // Rayleigh quotient of m^T m at v
      const double gn = g.norm();
      if (gn == 0.0) return next;
      v = g / gn;
      if (it > 0 && std::abs(next - lambda) <= 1e-2 * rel_tol * next) {
        lambda = next;
        break;
      }
      lambda = next;
    }
    // Final quotient at the converged direction.
    return std::max(lambda, (m * v).squaredNorm());
  };

  Vector start(cols);
  for (Eigen::Index i = 0; i < cols; ++i) start[i] = 1.0 + 0.5 * std::sin(1.0 + static_cast<double>(i));
  double best = iterate(start);
  if (best <= 1e-3 * fro * fro / static_cast<double>(std::min(m.rows(), cols))) {
    for (Eigen::Index i = 0; i < cols; ++i) best = std::max(best, iterate(Vector::Unit(cols, i)));
  }
  return std::sqrt(best);
}

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

double lambda_min_sym(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(m), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw DomainError("symmetric eigensolver failed");
  return es.eigenvalues().minCoeff();
}

std::optional<double> logdet_spd(const Matrix& m) {
  Eigen::LLT<Matrix> llt(symmetrize(m));
  if (llt.info() != Eigen::Success) return std::nullopt;
  const auto diag = llt.matrixLLT().diagonal();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (!(diag[i] > 0.0)) return std::nullopt;
    sum += std::log(diag[i]);
  }
  return 2.0 * sum;
}

SpectralRadius spectral_radius(const Matrix& m) {
  if (m.rows() != m.cols()) throw DomainError("spectral_radius: matrix must be square");
  if (m.size() == 0) return {0.0, true};
  Eigen::EigenSolver<Matrix> es(m, false);
  if (es.info() != Eigen::Success) throw DomainError("spectral_radius: eigensolver failed");
  const double rho = es.eigenvalues().cwiseAbs().maxCoeff();
  return {rho, rho <= 1.0 + 1e-8};
}

}  // namespace fodsid
