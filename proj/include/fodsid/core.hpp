#ifndef FODSID_CORE_HPP
#define FODSID_CORE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace fodsid {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Largest fractional order accepted. Orders above this make the marginal
/// stability hypothesis of the certificates implausible.
inline constexpr double kMaxOrder = 2.0;

/**
 * How the lag-0 block A_0 of the convolutional form is assembled.
 *
 * `derivation` gives A_0 = A + diag(alpha), which follows from
 * psi(alpha, 1) = -alpha and reduces to x[k+1] = (A + I) x[k] at alpha = 1.
 * `as_printed` gives A_0 = A - diag(alpha).
 */
enum class A0Convention { derivation, as_printed };

/**
 * Ground-truth discrete-time fractional-order system
 *
 *   Delta^alpha x[k+1] = A x[k] + B u[k] + w[k],   w[k] ~ N(0, sigma^2 I).
 *
 * Construct through make() so the invariants are checked once.
 */
struct FracSystem {
  Vector alpha;
  Matrix A;
  std::optional<Matrix> B;
  double sigma = 0.0;

  int n() const { return static_cast<int>(A.rows()); }
  int m() const { return B ? static_cast<int>(B->cols()) : 0; }

  /// Throws DomainError unless alpha has n entries in (0, 2], A is n x n,
  /// B (if any) has n rows and sigma >= 0.
  void validate() const;

  static FracSystem make(Vector alpha, Matrix A, std::optional<Matrix> B = std::nullopt,
                         double sigma = 0.0);
};

/// Grunwald-Letnikov weights psi(alpha, 0..J).
struct GlWeights {
  double alpha = 0.0;
  std::vector<double> values;

  std::int64_t max_lag() const { return static_cast<std::int64_t>(values.size()) - 1; }
};

/// psi(alpha, j) = (-1)^j binom(alpha, j) by the overflow-free recurrence
/// psi(alpha, j) = psi(alpha, j-1) (j - 1 - alpha) / j.
GlWeights gl_weights(double alpha, std::int64_t max_lag);

/// Lag-j coefficient matrix of x[k+1] = sum_j A_j x[k-j] + w[k].
/// For j >= 1 this is -diag(psi(alpha_i, j+1)).
Matrix build_Aj(const FracSystem& system, std::int64_t j,
                A0Convention convention = A0Convention::derivation);

/// Diagonals of A_1 .. A_count (row j-1 holds diag(A_j)). Used by the
/// exact simulator, which needs the whole memory tail.
Matrix memory_diagonals(const Vector& alpha, std::int64_t count);

/// p-augmented LTI realization of a FracSystem.
struct AugmentedSystem {
  int p = 1;
  int n = 1;
  Matrix Atilde;                 // d x d block companion
  std::optional<Matrix> Btilde;  // d x m, [B; 0; ...; 0]
  Matrix Btilde_w;               // d x n, [I; 0; ...; 0]
  Vector alpha;

  int d() const { return n * p; }

  /// n x n block (row, col) of Atilde.
  Matrix block(int row, int col) const { return Atilde.block(row * n, col * n, n, n); }
};

AugmentedSystem augment(const FracSystem& system, int p,
                        A0Convention convention = A0Convention::derivation);

/// Block-companion matrix with the given top block row and identity subdiagonal.
Matrix companion_from_top_row(const Matrix& top_row, int n);

}  // namespace fodsid

#endif  // FODSID_CORE_HPP
