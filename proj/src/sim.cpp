#include "fodsid/sim.hpp"

#include <string>

#include "fodsid/error.hpp"
#include "fodsid/rng.hpp"

namespace fodsid {
namespace {

Matrix draw_stream(const NoiseSource& source, StreamPurpose purpose, int rows, int cols,
                   double scale) {
  NormalStream stream(source.seed, source.trajectory_index, purpose);
  Matrix out(rows, cols);
  for (int k = 0; k < rows; ++k) {
    for (int i = 0; i < cols; ++i) out(k, i) = scale * stream.next();
  }
  return out;
}

void check_common(int n, const Vector& x0, int K) {
  if (K < 1) throw DomainError("simulation horizon K must be >= 1");
  if (x0.size() != n) {
    throw DomainError("initial state has " + std::to_string(x0.size()) + " entries, expected " +
                      std::to_string(n));
  }
}

void check_inputs(const std::optional<Matrix>& B, const std::optional<Matrix>& inputs, int K) {
  if (inputs.has_value() != B.has_value()) {
    throw ConfigError(inputs ? "inputs supplied but the system has no input matrix B"
                             : "system has an input matrix B but no inputs were supplied");
  }
  if (inputs && (inputs->rows() != K || inputs->cols() != B->cols())) {
    throw DomainError("inputs must be K x m = " + std::to_string(K) + "x" +
                      std::to_string(B->cols()));
  }
}

}  // namespace

Matrix draw_noise(const NoiseSource& source, int K, int n, double sigma) {
  return draw_stream(source, StreamPurpose::process_noise, K, n, sigma);
}

Matrix draw_inputs(const NoiseSource& source, int K, int m, double sigma_u) {
  return draw_stream(source, StreamPurpose::input, K, m, sigma_u);
}

// Both simulators accumulate each output component left to right over the
// same coefficients: lag-0 row, then lags 1.. in order, then B u, then w.
// Terms that are structurally zero contribute exact zeros, so for k <= p the
// two produce identical doubles.

Trajectory simulate_exact(const FracSystem& system, const Vector& x0, int K,
                          const NoiseSource& noise, const std::optional<Matrix>& inputs,
                          A0Convention convention) {
  system.validate();
  const int n = system.n();
  check_common(n, x0, K);
  check_inputs(system.B, inputs, K);

  const Matrix a0 = build_Aj(system, 0, convention);
  const Matrix diags = memory_diagonals(system.alpha, K);
  const Matrix w = draw_noise(noise, K, n, system.sigma);

  Matrix x = Matrix::Zero(K + 1, n);
  x.row(0) = x0.transpose();
  for (int k = 0; k < K; ++k) {
    for (int r = 0; r < n; ++r) {
      double acc = 0.0;
      for (int c = 0; c < n; ++c) acc += a0(r, c) * x(k, c);
      for (int j = 1; j <= k; ++j) acc += diags(j - 1, r) * x(k - j, r);
      if (inputs) {
        for (int c = 0; c < inputs->cols(); ++c) acc += (*system.B)(r, c) * (*inputs)(k, c);
      }
      acc += w(k, r);
      x(k + 1, r) = acc;
    }
  }

  Trajectory traj;
  traj.states = std::move(x);
  traj.inputs = inputs;
  traj.noises = w;
  traj.meta.seed = noise.seed;
  traj.meta.trajectory_index = noise.trajectory_index;
  traj.meta.generator = "exact";
  traj.meta.sigma = system.sigma;
  return traj;
}

Trajectory simulate_augmented(const AugmentedSystem& aug, const Vector& x0, int K,
                              const NoiseSource& noise, double sigma,
                              const std::optional<Matrix>& inputs) {
  const int n = aug.n;
  const int d = aug.d();
  if (aug.Atilde.rows() != d || aug.Atilde.cols() != d) {
    throw DomainError("augmented system matrix must be d x d");
  }
  if (!(sigma >= 0.0)) throw DomainError("sigma must be non-negative");
  check_common(n, x0, K);
  check_inputs(aug.Btilde, inputs, K);

  const Matrix w = draw_noise(noise, K, n, sigma);
  Vector xt = Vector::Zero(d);
  xt.head(n) = x0;
  Vector next(d);

  Matrix x = Matrix::Zero(K + 1, n);
  x.row(0) = x0.transpose();
  for (int k = 0; k < K; ++k) {
    for (int r = 0; r < d; ++r) {
      double acc = 0.0;
      for (int c = 0; c < d; ++c) acc += aug.Atilde(r, c) * xt[c];
      if (inputs) {
        for (int c = 0; c < inputs->cols(); ++c) acc += (*aug.Btilde)(r, c) * (*inputs)(k, c);
      }
      for (int c = 0; c < n; ++c) acc += aug.Btilde_w(r, c) * w(k, c);
      next[r] = acc;
    }
    xt.swap(next);
    x.row(k + 1) = xt.head(n).transpose();
  }

  Trajectory traj;
  traj.states = std::move(x);
  traj.inputs = inputs;
  traj.noises = w;
  traj.meta.seed = noise.seed;
  traj.meta.trajectory_index = noise.trajectory_index;
  traj.meta.generator = "augmented:" + std::to_string(aug.p);
  traj.meta.sigma = sigma;
  return traj;
}

std::vector<TruncationErrorRow> truncation_error_sweep(const FracSystem& system, const Vector& x0,
                                                       int K, const std::vector<int>& p_list,
                                                       const NoiseSource& noise) {
  if (p_list.empty()) throw DomainError("truncation_error_sweep: empty p list");
  for (int p : p_list) {
    if (p < 1) throw DomainError("truncation_error_sweep: every p must be >= 1");
  }
  FracSystem autonomous = system;
  autonomous.B.reset();
  const Trajectory exact = simulate_exact(autonomous, x0, K, noise);
  std::vector<TruncationErrorRow> rows;
  rows.reserve(p_list.size());
  for (int p : p_list) {
    const Trajectory approx =
        simulate_augmented(augment(autonomous, p), x0, K, noise, system.sigma);
    const double err = (exact.states - approx.states).rowwise().norm().maxCoeff();
    rows.push_back({p, err});
  }
  return rows;
}

}  // namespace fodsid
