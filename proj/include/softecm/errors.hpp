#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace softecm {

// Malformed input files or tables. Row/column are 1-based when known.
class DataFormatError : public std::runtime_error {
 public:
  DataFormatError(const std::string& what, std::optional<std::size_t> row = std::nullopt,
                  std::optional<std::size_t> column = std::nullopt);

  std::optional<std::size_t> row() const noexcept { return row_; }
  std::optional<std::size_t> column() const noexcept { return column_; }

 private:
  std::optional<std::size_t> row_;
  std::optional<std::size_t> column_;
};

// A NaN/Inf showed up during optimization.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace softecm
