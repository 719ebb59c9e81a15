#include "fodsid/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "fodsid/error.hpp"

namespace fodsid {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

bool parse_double(std::string_view text, double& out) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  return res.ec == std::errc() && res.ptr == text.data() + text.size();
}

CsvTable read_csv(std::istream& in, char delimiter, const std::string& path) {
  const std::string data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  std::size_t i = 0;
  if (data.compare(0, 3, "\xEF\xBB\xBF") == 0) i = 3;

  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  auto end_record = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
    // Skip blank lines.
    if (!(record.size() == 1 && record[0].empty())) records.push_back(std::move(record));
    record.clear();
  };

  for (; i < data.size(); ++i) {
    const char c = data[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < data.size() && data[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"' && !field_started) {
      in_quotes = true;
      field_started = true;
    } else if (c == delimiter) {
      record.push_back(std::move(field));
      field.clear();
      field_started = false;
    } else if (c == '\r' && i + 1 < data.size() && data[i + 1] == '\n') {
      // handled by the '\n'
    } else if (c == '\n' || c == '\r') {
      end_record();
    } else {
      field += c;
      field_started = true;
    }
  }
  if (in_quotes) throw DataError("unterminated quoted field", path);
  if (field_started || !field.empty() || !record.empty()) end_record();

  if (records.empty()) throw DataError("empty CSV file", path);
  CsvTable table;
  table.header = std::move(records.front());
  for (auto& h : table.header) {
    while (!h.empty() && h.front() == ' ') h.erase(h.begin());
    while (!h.empty() && h.back() == ' ') h.pop_back();
  }
  table.rows.assign(std::make_move_iterator(records.begin() + 1),
                    std::make_move_iterator(records.end()));
  return table;
}

CsvTable read_csv_file(const std::string& path, char delimiter) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file '" + path + "'", path);
  return read_csv(in, delimiter, path);
}

std::string csv_field(const std::string& field, char delimiter) {
  if (field.find_first_of(std::string{delimiter, '"', '\n', '\r'}) == std::string::npos) {
    return field;
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw ConfigError(what + ": expected a non-empty list of rows");
  const std::size_t cols = j.front().is_array() ? j.front().size() : 0;
  if (cols == 0) throw ConfigError(what + ": rows must be non-empty lists of numbers");
  Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      throw ConfigError(what + ": row " + std::to_string(r) + " has the wrong length");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) throw ConfigError(what + ": non-numeric entry");
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
    }
  }
  return m;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Vector vector_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) throw ConfigError(what + ": expected a list of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(what + ": non-numeric entry");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

FracSystem system_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("system description must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (key != "n" && key != "alpha" && key != "A" && key != "B" && key != "sigma") {
      throw ConfigError("system description: unknown key '" + key + "'");
    }
  }
  for (const char* key : {"n", "alpha", "A"}) {
    if (!j.contains(key)) throw ConfigError(std::string("system description: missing key '") + key + "'");
  }
  if (!j.at("n").is_number_integer()) throw ConfigError("system description: n must be an integer");
  const int n = j.at("n").get<int>();
  Vector alpha = vector_from_json(j.at("alpha"), "alpha");
  Matrix A = matrix_from_json(j.at("A"), "A");
  std::optional<Matrix> B;
  if (j.contains("B") && !j.at("B").is_null()) B = matrix_from_json(j.at("B"), "B");
  double sigma = 0.0;
  if (j.contains("sigma")) {
    if (!j.at("sigma").is_number()) throw ConfigError("system description: sigma must be a number");
    sigma = j.at("sigma").get<double>();
  }
  if (A.rows() != n) {
    throw DomainError("system description: n = " + std::to_string(n) + " but A has " +
                      std::to_string(A.rows()) + " rows");
  }
  return FracSystem::make(std::move(alpha), std::move(A), std::move(B), sigma);
}

json system_to_json(const FracSystem& system) {
  json j;
  j["n"] = system.n();
  j["alpha"] = vector_to_json(system.alpha);
  j["A"] = matrix_to_json(system.A);
  j["B"] = system.B ? matrix_to_json(*system.B) : json(nullptr);
  j["sigma"] = system.sigma;
  return j;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file '" + path + "'", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json load_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("invalid JSON in '" + path + "': " + e.what(), path);
  }
}

FracSystem load_system(const std::string& path) {
  try {
    return system_from_json(load_json_file(path));
  } catch (const ConfigError& e) {
    throw ConfigError(e.what(), path);
  }
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  const int n = traj.n();
  const int m = traj.inputs ? static_cast<int>(traj.inputs->cols()) : 0;
  os << 'k';
  for (int i = 1; i <= n; ++i) os << ",x" << i;
  for (int i = 1; i <= m; ++i) os << ",u" << i;
  os << '\n';
  for (int k = 0; k <= traj.K(); ++k) {
    os << k;
    for (int i = 0; i < n; ++i) os << ',' << format_double(traj.states(k, i));
    for (int i = 0; i < m; ++i) {
      os << ',';
      if (k < traj.K()) os << format_double((*traj.inputs)(k, i));
    }
    os << '\n';
  }
}

Trajectory read_trajectory_csv(const std::string& path) {
  const CsvTable table = read_csv_file(path);
  if (table.header.empty() || table.header[0] != "k") {
    throw DataError("trajectory CSV must start with a 'k' column", path);
  }
  std::vector<int> xcols;
  std::vector<int> ucols;
  for (std::size_t c = 1; c < table.header.size(); ++c) {
    const std::string& h = table.header[c];
    const std::string expect_x = "x" + std::to_string(xcols.size() + 1);
    const std::string expect_u = "u" + std::to_string(ucols.size() + 1);
    if (ucols.empty() && h == expect_x) {
      xcols.push_back(static_cast<int>(c));
    } else if (h == expect_u) {
      ucols.push_back(static_cast<int>(c));
    } else {
      throw DataError("unexpected trajectory column '" + h + "'", path);
    }
  }
  if (xcols.empty()) throw DataError("trajectory CSV has no state columns", path);
  if (table.rows.empty()) throw DataError("trajectory CSV has no rows", path);

  const auto T = static_cast<Eigen::Index>(table.rows.size());
  Trajectory traj;
  traj.states.resize(T, static_cast<Eigen::Index>(xcols.size()));
  if (!ucols.empty()) traj.inputs = Matrix(T - 1, static_cast<Eigen::Index>(ucols.size()));
  for (Eigen::Index r = 0; r < T; ++r) {
    const auto& row = table.rows[static_cast<std::size_t>(r)];
    const std::size_t line = static_cast<std::size_t>(r) + 1;
    if (row.size() != table.header.size()) {
      throw DataError("row " + std::to_string(line) + " has " + std::to_string(row.size()) +
                      " fields, expected " + std::to_string(table.header.size()), path, line);
    }
    double kval = 0;
    if (!parse_double(row[0], kval) || kval != static_cast<double>(r)) {
      throw DataError("row " + std::to_string(line) + ": time index must be " + std::to_string(r),
                      path, line);
    }
    for (std::size_t i = 0; i < xcols.size(); ++i) {
      double v = 0;
      if (!parse_double(row[static_cast<std::size_t>(xcols[i])], v) || !std::isfinite(v)) {
        throw DataError("row " + std::to_string(line) + ": non-numeric state value", path, line);
      }
      traj.states(r, static_cast<Eigen::Index>(i)) = v;
    }
    if (r + 1 < T) {
      for (std::size_t i = 0; i < ucols.size(); ++i) {
        double v = 0;
        if (!parse_double(row[static_cast<std::size_t>(ucols[i])], v) || !std::isfinite(v)) {
          throw DataError("row " + std::to_string(line) + ": non-numeric input value", path, line);
        }
        (*traj.inputs)(r, static_cast<Eigen::Index>(i)) = v;
      }
    }
  }
  traj.meta.generator = "file";
  return traj;
}

json trajectory_meta_json(const TrajectoryMeta& meta) {
  json j;
  j["seed"] = meta.seed;
  j["trajectory_index"] = meta.trajectory_index;
  j["generator"] = meta.generator;
  j["sigma"] = meta.sigma;
  j["sigma_u"] = meta.sigma_u ? json(*meta.sigma_u) : json(nullptr);
  return j;
}

}  // namespace fodsid
