#ifndef FODSID_ERROR_HPP
#define FODSID_ERROR_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace fodsid {

/// Violated mathematical precondition (bad order, negative lag, shape mismatch).
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Inconsistent or unknown configuration, e.g. inputs supplied without B.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what, std::string path = {})
      : std::runtime_error(what), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

private:
  std::string path_;
};

/// Malformed input data. Carries the offending file and (1-based) data row when known.
class DataError : public std::runtime_error {
public:
  explicit DataError(const std::string& what, std::string path = {},
                     std::optional<std::size_t> row = std::nullopt)
      : std::runtime_error(what), path_(std::move(path)), row_(row) {}

  const std::string& path() const noexcept { return path_; }
  std::optional<std::size_t> row() const noexcept { return row_; }

private:
  std::string path_;
  std::optional<std::size_t> row_;
};

}  // namespace fodsid

#endif  // FODSID_ERROR_HPP
