#include "fodsid/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "fodsid/error.hpp"
#include "fodsid/io.hpp"
#include "fodsid/parallel.hpp"

namespace fodsid {

Series load_series(const std::string& path, const SeriesOptions& options) {
  CsvTable table;
  try {
    table = read_csv_file(path, options.delimiter);
  } catch (const ConfigError& e) {
    throw DataError(e.what(), path);
  }
  std::vector<std::size_t> cols;
  Series series;
  if (options.channel_columns.empty()) {
    for (std::size_t c = 0; c < table.header.size(); ++c) cols.push_back(c);
    series.names = table.header;
  } else {
    for (const auto& name : options.channel_columns) {
      const auto it = std::find(table.header.begin(), table.header.end(), name);
      if (it == table.header.end()) throw DataError("missing column '" + name + "'", path);
      cols.push_back(static_cast<std::size_t>(it - table.header.begin()));
      series.names.push_back(name);
    }
  }
  std::size_t rows = table.rows.size();
  if (options.max_rows) rows = std::min(rows, *options.max_rows);
  if (rows == 0 || cols.empty()) throw DataError("series file has no data rows", path);

  series.values.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& row = table.rows[r];
    const std::size_t data_row = r + 1;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const std::size_t col = cols[c];
      double v = 0.0;
      if (col >= row.size() || !parse_double(row[col], v)) {
        throw DataError("data row " + std::to_string(data_row) + ", column '" +
                            table.header[col] + "': non-numeric cell",
                        path, data_row);
      }
      if (!std::isfinite(v)) {
        throw DataError("data row " + std::to_string(data_row) + ", column '" +
                            table.header[col] + "': NaN or infinite value",
                        path, data_row);
      }
      series.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
    }
  }
  return series;
}

namespace {

struct WindowResult {
  OlsEstimate estimate;
  std::vector<int> index;
  Matrix predictions;
};

WindowResult fit_window(const Matrix& data, int begin, int size, int p, bool structured,
                        bool forecast_next) {
  Trajectory traj;
  traj.states = data.middleRows(begin, size);
  OlsOptions opts;
  opts.structured = structured;
  WindowResult out;
  out.estimate = ols_fit(traj, p, opts);

  const Matrix xt = augmented_states(traj.states, p);
  const int n = static_cast<int>(data.cols());
  const Matrix top = out.estimate.Atilde_hat.topRows(n);
  if (forecast_next) {
    out.predictions = (top * xt.row(size - 1).transpose()).transpose();
    out.index.push_back(begin + size);
  } else {
    out.predictions = xt.topRows(size - 1) * top.transpose();
    for (int k = 0; k + 1 < size; ++k) out.index.push_back(begin + k + 1);
  }
  return out;
}

}  // namespace

WindowedForecast windowed_fit_predict(const Series& series, const Vector& alpha,
                                      const ForecastOptions& options) {
  const int T = series.length();
  const int n = series.channels();
  const int W = options.window_size;
  const int p = options.p > 0 ? options.p : W - 2;
  if (alpha.size() != n) {
    throw DomainError("need one fractional order per channel: got " + std::to_string(alpha.size()) +
                      " for " + std::to_string(n) + " channels");
  }
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    if (!(alpha[i] > 0.0) || alpha[i] > kMaxOrder) throw DomainError("alpha outside (0, 2]");
  }
  if (p < 1 || W < p + 2) {
    throw DomainError("window size " + std::to_string(W) + " too small for p = " +
                      std::to_string(p) + " (need window_size >= p + 2)");
  }
  if (W > T) {
    throw DomainError("window size " + std::to_string(W) + " exceeds series length " +
                      std::to_string(T));
  }
  if (options.sliding && W >= T) {
    throw DomainError("sliding mode needs at least one sample after the first window");
  }

  Matrix data = series.values;
  Vector mean = Vector::Zero(n);
  Vector scale = Vector::Ones(n);
  if (options.zscore) {
    mean = data.colwise().mean().transpose();
    for (int c = 0; c < n; ++c) {
      const double var = (data.col(c).array() - mean[c]).square().sum() / std::max(T - 1, 1);
      if (var > 0.0) scale[c] = std::sqrt(var);
      data.col(c) = (data.col(c).array() - mean[c]) / scale[c];
    }
  }

  const int num_windows = options.sliding ? T - W : T / W;
  std::vector<WindowResult> results(static_cast<std::size_t>(num_windows));
  parallel_for(results.size(), options.threads, [&](std::size_t w) {
    const int begin = options.sliding ? static_cast<int>(w) : static_cast<int>(w) * W;
    results[w] = fit_window(data, begin, W, p, options.structured, options.sliding);
  });

  WindowedForecast fc;
  fc.window_size = W;
  fc.p = p;
  fc.channels = n;
  int total = 0;
  for (const auto& r : results) total += static_cast<int>(r.index.size());
  fc.predictions.resize(total, n);
  int row = 0;
  for (auto& r : results) {
    for (std::size_t i = 0; i < r.index.size(); ++i, ++row) {
      fc.predicted_index.push_back(r.index[i]);
      for (int c = 0; c < n; ++c) {
        fc.predictions(row, c) = r.predictions(static_cast<Eigen::Index>(i), c) * scale[c] + mean[c];
      }
    }
    Matrix a = r.estimate.Atilde_hat.topLeftCorner(n, n);
    const double sign = options.convention == A0Convention::derivation ? -1.0 : 1.0;
    a.diagonal() += sign * alpha;
    fc.per_window_A.push_back(std::move(a));
    fc.per_window_estimates.push_back(std::move(r.estimate));
  }

  ForecastMetrics& m = fc.metrics;
  m.num_windows = num_windows;
  m.num_predictions = total;
  Vector se = Vector::Zero(n);
  Vector se_persist = Vector::Zero(n);
  for (int i = 0; i < total; ++i) {
    const int k = fc.predicted_index[static_cast<std::size_t>(i)];
    for (int c = 0; c < n; ++c) {
      const double e = fc.predictions(i, c) - series.values(k, c);
      const double ep = series.values(k - 1, c) - series.values(k, c);
      se[c] += e * e;
      se_persist[c] += ep * ep;
    }
  }
  const double denom = std::max(total, 1);
  for (int c = 0; c < n; ++c) {
    m.rmse_per_channel.push_back(std::sqrt(se[c] / denom));
    m.persistence_rmse_per_channel.push_back(std::sqrt(se_persist[c] / denom));
  }
  m.rmse_total = std::sqrt(se.sum() / (denom * n));
  m.persistence_rmse_total = std::sqrt(se_persist.sum() / (denom * n));
  return fc;
}

std::vector<SweepRow> window_size_sweep(const Series& series, const Vector& alpha,
                                        const std::vector<int>& window_sizes,
                                        const ForecastOptions& base) {
  std::vector<SweepRow> rows;
  for (int W : window_sizes) {
    SweepRow row;
    row.window_size = W;
    ForecastOptions opts = base;
    opts.window_size = W;
    row.p = opts.p > 0 ? opts.p : W - 2;
    try {
      const WindowedForecast fc = windowed_fit_predict(series, alpha, opts);
      row.rmse = fc.metrics.rmse_total;
      row.persistence_rmse = fc.metrics.persistence_rmse_total;
      row.num_windows = fc.metrics.num_windows;
    } catch (const std::exception& e) {
      row.rmse = std::numeric_limits<double>::quiet_NaN();
      row.persistence_rmse = std::numeric_limits<double>::quiet_NaN();
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_predictions_csv(std::ostream& os, const Series& series, const WindowedForecast& fc) {
  const int n = series.channels();
  os << 'k';
  for (int i = 1; i <= n; ++i) os << ",x" << i;
  for (int i = 1; i <= n; ++i) os << ",xhat" << i;
  os << '\n';
  std::size_t next = 0;
  for (int k = 0; k < series.length(); ++k) {
    os << k;
    for (int c = 0; c < n; ++c) os << ',' << format_double(series.values(k, c));
    const bool predicted =
        next < fc.predicted_index.size() && fc.predicted_index[next] == k;
    for (int c = 0; c < n; ++c) {
      os << ',';
      if (predicted) os << format_double(fc.predictions(static_cast<Eigen::Index>(next), c));
    }
    if (predicted) ++next;
    os << '\n';
  }
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "window_size,rmse\n";
  for (const auto& r : rows) os << r.window_size << ',' << format_double(r.rmse) << '\n';
}

}  // namespace fodsid
