#ifndef FODSID_LINALG_HPP
#define FODSID_LINALG_HPP

#include <optional>

#include "fodsid/core.hpp"

namespace fodsid {

/// Largest singular value of `m` by power iteration on m^T m. Stops once the
/// Rayleigh quotient moves by less than rel_tol / 100 (relative) per sweep.
double operator_norm(const Matrix& m, double rel_tol = 1e-10);

/// (m + m^T) / 2
Matrix symmetrize(const Matrix& m);

/// Smallest eigenvalue of the symmetric part of `m`.
double lambda_min_sym(const Matrix& m);

/// log det of the symmetric part of `m` via Cholesky; empty if not positive definite.
std::optional<double> logdet_spd(const Matrix& m);

struct SpectralRadius {
  double rho = 0.0;
  bool marginally_stable = false;  // rho <= 1 + 1e-8
};

/// Largest eigenvalue modulus (dense nonsymmetric eigensolver).
SpectralRadius spectral_radius(const Matrix& m);

}  // namespace fodsid

#endif  // FODSID_LINALG_HPP
