#pragma once
// File formats: numeric CSV, categorical CSV, time-series JSON lines / wide
// CSV, label files, and mass matrices with focal-set headers.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "softecm/datasets.hpp"
#include "softecm/focal.hpp"

namespace softecm {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

/// Which column carries integer class labels: "none", "auto" (a header named
/// "label"), "last", a header name, or a 1-based column number.
struct CsvOptions {
  std::optional<bool> header;  // nullopt: header when the first row is not all numeric
  std::string label_column = "auto";
};

std::vector<std::vector<std::string>> read_csv_rows(const std::filesystem::path& path);
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

Dataset load_numeric_csv(const std::filesystem::path& path, const CsvOptions& options = {});
void save_numeric_csv(const std::filesystem::path& path, const Dataset& data);

/// Schema inferred from the file unless supplied.
Dataset load_categorical_csv(const std::filesystem::path& path, const CsvOptions& options = {},
                             const std::optional<CategoricalSchema>& schema = std::nullopt);
void save_categorical_csv(const std::filesystem::path& path, const Dataset& data);

/// {"id": str?, "label": int?, "series": [[...], ...]} per line, outer index = time.
Dataset load_timeseries_jsonl(const std::filesystem::path& path);
void save_timeseries_jsonl(const std::filesystem::path& path, const Dataset& data);

/// One univariate series per row, optional label column.
Dataset load_timeseries_wide_csv(const std::filesystem::path& path, const CsvOptions& options = {});

/// Time series by extension: .csv is wide CSV, anything else JSON lines.
Dataset load_timeseries(const std::filesystem::path& path, const CsvOptions& options = {});

/// Integer per line; an optional non-numeric first line is a header.
std::vector<int> load_labels(const std::filesystem::path& path);
void save_labels(const std::filesystem::path& path, const std::vector<int>& labels);

/// Header: optional "id" column, then focal labels such as "{}", "{1}", "{1,2}".
void save_masses_csv(const std::filesystem::path& path, const CredalPartition& partition,
                     const std::vector<std::string>& names = {});
CredalPartition load_masses_csv(const std::filesystem::path& path);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace softecm
