#ifndef FODSID_IO_HPP
#define FODSID_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "fodsid/core.hpp"
#include "fodsid/sim.hpp"

namespace fodsid {

using json = nlohmann::ordered_json;

/// Shortest decimal string that parses back to the same double ("nan", "inf", "-inf" otherwise).
std::string format_double(double v);

/// Strict full-string parse; rejects empty cells, trailing garbage and hex.
bool parse_double(std::string_view text, double& out);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// RFC-4180 reader: quoted fields may contain delimiters, doubled quotes and
/// line breaks; CRLF and LF are both accepted. The first record is the header.
/// A UTF-8 byte-order mark is skipped. `path` only labels error messages.
CsvTable read_csv(std::istream& in, char delimiter = ',', const std::string& path = {});
CsvTable read_csv_file(const std::string& path, char delimiter = ',');

/// Quotes a field when it contains the delimiter, a quote or a line break.
std::string csv_field(const std::string& field, char delimiter = ',');

json matrix_to_json(const Matrix& m);
/// Accepts a list of equal-length rows of numbers; `what` names the field in errors.
Matrix matrix_from_json(const json& j, const std::string& what);
json vector_to_json(const Vector& v);
Vector vector_from_json(const json& j, const std::string& what);

/// {"n", "alpha", "A", "B" | null, "sigma"}; unknown keys are rejected.
FracSystem system_from_json(const json& j);
json system_to_json(const FracSystem& system);
FracSystem load_system(const std::string& path);

/// Header `k,x1..xn[,u1..um]`, one row per time index 0..K. The input
/// columns of the last row (which has no transition) are left empty.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
Trajectory read_trajectory_csv(const std::string& path);

json trajectory_meta_json(const TrajectoryMeta& meta);

/// Reads a whole file; throws ConfigError naming the path if it cannot be opened.
std::string read_text_file(const std::string& path);
json load_json_file(const std::string& path);

}  // namespace fodsid

#endif  // FODSID_IO_HPP
