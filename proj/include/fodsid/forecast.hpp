#ifndef FODSID_FORECAST_HPP
#define FODSID_FORECAST_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fodsid/core.hpp"
#include "fodsid/ident.hpp"

namespace fodsid {

/// T x n multichannel series with its column names.
struct Series {
  Matrix values;
  std::vector<std::string> names;

  int length() const { return static_cast<int>(values.rows()); }
  int channels() const { return static_cast<int>(values.cols()); }
};

struct SeriesOptions {
  char delimiter = ',';
  /// Columns to keep, in this order; empty keeps every column.
  std::vector<std::string> channel_columns;
  std::optional<std::size_t> max_rows;
};

/// Reads a headed CSV of numeric channels. Missing columns, non-numeric cells,
/// NaN/inf values and empty files throw DataError naming the data row.
Series load_series(const std::string& path, const SeriesOptions& options = {});

struct ForecastOptions {
  int window_size = 10;
  /// Truncation length; 0 selects window_size - 2.
  int p = 0;
  /// Sliding windows (stride 1) forecasting the sample after each window,
  /// instead of disjoint windows with in-window predictions.
  bool sliding = false;
  /// Per-channel z-scoring before fitting; predictions are mapped back.
  bool zscore = false;
  bool structured = false;
  int threads = 1;
  A0Convention convention = A0Convention::derivation;
};

struct ForecastMetrics {
  double rmse_total = 0.0;
  std::vector<double> rmse_per_channel;
  /// Same steps, predicting x[k+1] = x[k].
  double persistence_rmse_total = 0.0;
  std::vector<double> persistence_rmse_per_channel;
  int num_windows = 0;
  int num_predictions = 0;
};

struct WindowedForecast {
  int window_size = 0;
  int p = 0;
  int channels = 0;
  /// Series index of every prediction, ascending.
  std::vector<int> predicted_index;
  /// One row per entry of predicted_index.
  Matrix predictions;
  std::vector<OlsEstimate> per_window_estimates;
  /// A recovered from each window's lag-0 block: A_0 -+ diag(alpha).
  std::vector<Matrix> per_window_A;
  ForecastMetrics metrics;
};

/**
 * Fits one OLS model per window and predicts one step ahead.
 *
 * Disjoint mode partitions the first floor(T / W) * W samples into
 * consecutive windows of W samples; inside each, x_hat[k+1] = top rows of
 * A_w x~[k] for every transition, with regressors zero-padded at the window
 * start and never reaching outside the window. Sliding mode fits on
 * [t-W+1, t] and forecasts x[t+1] for each t.
 *
 * Requires window_size >= p + 2 and window_size <= T (DomainError otherwise),
 * and one alpha per channel.
 */
WindowedForecast windowed_fit_predict(const Series& series, const Vector& alpha,
                                      const ForecastOptions& options);

struct SweepRow {
  int window_size = 0;
  int p = 0;
  double rmse = 0.0;
  double persistence_rmse = 0.0;
  int num_windows = 0;
  std::string error;  // empty on success
};

/// One windowed_fit_predict per size; failures land in the row's error field.
std::vector<SweepRow> window_size_sweep(const Series& series, const Vector& alpha,
                                        const std::vector<int>& window_sizes,
                                        const ForecastOptions& base);

/// `k,x1..xn,xhat1..xhatn`, one row per series sample; xhat cells are empty
/// where no prediction was made.
void write_predictions_csv(std::ostream& os, const Series& series, const WindowedForecast& fc);

/// `window_size,rmse`
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace fodsid

#endif  // FODSID_FORECAST_HPP
