#ifndef FODSID_SIM_HPP
#define FODSID_SIM_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fodsid/core.hpp"

namespace fodsid {

struct TrajectoryMeta {
  std::uint64_t seed = 0;
  std::uint32_t trajectory_index = 0;
  std::string generator;  // "exact" or "augmented:<p>"
  double sigma = 0.0;
  std::optional<double> sigma_u;
};

/// States x[0..K] as rows of a (K+1) x n array, with optional inputs and
/// realized noises u[0..K-1], w[0..K-1] as K-row arrays.
struct Trajectory {
  Matrix states;
  std::optional<Matrix> inputs;
  std::optional<Matrix> noises;
  TrajectoryMeta meta;

  int n() const { return static_cast<int>(states.cols()); }
  int K() const { return static_cast<int>(states.rows()) - 1; }
};

/// Where the noise of a trajectory comes from: stream `trajectory_index` of
/// the Philox generator keyed by `seed`.
struct NoiseSource {
  std::uint64_t seed = 0;
  std::uint32_t trajectory_index = 0;
};

/// K x n realization of w[k] ~ N(0, sigma^2 I).
Matrix draw_noise(const NoiseSource& source, int K, int n, double sigma);

/// K x m i.i.d. N(0, sigma_u^2) inputs from the input stream of `source`,
/// independent of the process-noise stream.
Matrix draw_inputs(const NoiseSource& source, int K, int m, double sigma_u);

/**
 * Full-memory recursion x[k+1] = sum_{j=0}^{k} A_j x[k-j] + B u[k] + w[k].
 *
 * Cost is O(K^2 n). Throws ConfigError when inputs and B are not both present
 * or both absent, DomainError on shape mismatches.
 */
Trajectory simulate_exact(const FracSystem& system, const Vector& x0, int K,
                          const NoiseSource& noise,
                          const std::optional<Matrix>& inputs = std::nullopt,
                          A0Convention convention = A0Convention::derivation);

/// Propagates x~[k+1] = A~ x~[k] + B~ u[k] + B~w w[k] from [x0; 0; ...; 0] and
/// records the leading n components. The noise draw matches simulate_exact.
Trajectory simulate_augmented(const AugmentedSystem& aug, const Vector& x0, int K,
                              const NoiseSource& noise, double sigma,
                              const std::optional<Matrix>& inputs = std::nullopt);

struct TruncationErrorRow {
  int p = 0;
  double max_state_error = 0.0;
};

/// Worst-case deviation max_k ||x_exact[k] - x_aug[k]||_2 for each p, sharing
/// one noise realization.
std::vector<TruncationErrorRow> truncation_error_sweep(const FracSystem& system, const Vector& x0,
                                                       int K, const std::vector<int>& p_list,
                                                       const NoiseSource& noise);

}  // namespace fodsid

#endif  // FODSID_SIM_HPP
