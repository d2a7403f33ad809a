#include "softecm/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "softecm/errors.hpp"

namespace softecm {

namespace fs = std::filesystem;

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return {buf, res.ptr};
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataFormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, std::string_view text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

namespace {

struct Table {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> lines;  // 1-based file line of each row
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// RFC-4180-ish: quoted fields may hold commas, doubled quotes and newlines.
Table parse_table(std::string_view text) {
  Table t;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  std::size_t line = 1;
  std::size_t row_line = 1;
  auto end_field = [&] {
    row.push_back(was_quoted ? field : std::string(trim(field)));
    field.clear();
    was_quoted = false;
  };
  auto end_row = [&] {
    end_field();
    const bool blank = row.size() == 1 && row[0].empty();
    if (!blank) {
      t.rows.push_back(std::move(row));
      t.lines.push_back(row_line);
    }
    row.clear();
  };
  for (std::size_t k = 0; k < text.size(); ++k) {
    const char ch = text[k];
    if (quoted) {
      if (ch == '"') {
        if (k + 1 < text.size() && text[k + 1] == '"') {
          field.push_back('"');
          ++k;
        } else {
          quoted = false;
        }
      } else {
        if (ch == '\n') ++line;
        field.push_back(ch);
      }
      continue;
    }
    if (ch == '"' && trim(field).empty()) {
      field.clear();
      quoted = true;
      was_quoted = true;
    } else if (ch == ',') {
      end_field();
    } else if (ch == '\n') {
      end_row();
      ++line;
      row_line = line;
    } else {
      field.push_back(ch);
    }
  }
  if (quoted) throw DataFormatError("unterminated quoted field", row_line);
  if (!field.empty() || !row.empty()) end_row();
  return t;
}

std::optional<double> to_number(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

double number_cell(std::string_view s, std::size_t row, std::size_t col) {
  const auto v = to_number(s);
  if (!v) throw DataFormatError("non-numeric cell '" + std::string(s) + "'", row, col);
  if (!std::isfinite(*v)) throw DataFormatError("non-finite value", row, col);
  return *v;
}

int label_cell(std::string_view s, std::size_t row, std::size_t col) {
  s = trim(s);
  int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw DataFormatError("label '" + std::string(s) + "' is not an integer", row, col);
  }
  return v;
}

bool all_numeric(const std::vector<std::string>& row) {
  return std::all_of(row.begin(), row.end(), [](const std::string& s) { return to_number(s).has_value(); });
}

void check_rectangular(const Table& t) {
  if (t.rows.empty()) return;
  const std::size_t width = t.rows.front().size();
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (t.rows[r].size() != width) {
      throw DataFormatError("row has " + std::to_string(t.rows[r].size()) + " fields, expected " +
                                std::to_string(width),
                            t.lines[r]);
    }
  }
}

struct Layout {
  bool header = false;
  std::vector<std::string> names;  // header cells, empty when headerless
  std::optional<std::size_t> label_col;
  std::optional<std::size_t> id_col;
};

Layout resolve_layout(const Table& t, const CsvOptions& options, bool numeric_body) {
  Layout layout;
  if (t.rows.empty()) throw DataFormatError("empty file");
  const auto& first = t.rows.front();
  layout.header = options.header.value_or(numeric_body ? !all_numeric(first) : false);
  if (layout.header) layout.names = first;
  const std::size_t width = first.size();

  auto find = [&](std::string_view name) -> std::optional<std::size_t> {
    for (std::size_t j = 0; j < layout.names.size(); ++j) {
      if (layout.names[j] == name) return j;
    }
    return std::nullopt;
  };
  const std::string& spec = options.label_column;
  if (spec == "none") {
  } else if (spec == "auto") {
    layout.label_col = find("label");
  } else if (spec == "last") {
    layout.label_col = width - 1;
  } else if (auto col = to_number(spec); col && *col >= 1 && *col == std::floor(*col)) {
    if (*col > static_cast<double>(width)) throw DataFormatError("label column " + spec + " out of range");
    layout.label_col = static_cast<std::size_t>(*col) - 1;
  } else {
    layout.label_col = find(spec);
    if (!layout.label_col) throw DataFormatError("no column named '" + spec + "'");
  }
  layout.id_col = find("id");
  if (layout.id_col && layout.id_col == layout.label_col) layout.id_col.reset();
  return layout;
}

bool is_feature(const Layout& layout, std::size_t j) { return j != layout.label_col && j != layout.id_col; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos && trim(s) == s) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

std::string join_row(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t j = 0; j < cells.size(); ++j) {
    if (j) out += ',';
    out += csv_field(cells[j]);
  }
  return out + '\n';
}

}  // namespace

std::vector<std::vector<std::string>> parse_csv(std::string_view text) { return parse_table(text).rows; }

std::vector<std::vector<std::string>> read_csv_rows(const fs::path& path) { return parse_csv(read_text(path)); }

Dataset load_numeric_csv(const fs::path& path, const CsvOptions& options) {
  const Table t = parse_table(read_text(path));
  check_rectangular(t);
  const Layout layout = resolve_layout(t, options, true);
  Dataset d;
  d.kind = DataKind::Numeric;
  std::vector<int> labels;
  const std::size_t start = layout.header ? 1 : 0;
  const std::size_t width = t.rows.front().size();
  std::size_t features = 0;
  for (std::size_t j = 0; j < width; ++j) features += is_feature(layout, j) ? 1 : 0;
  if (features == 0) throw DataFormatError("no feature columns");
  for (std::size_t r = start; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    Object x(1, static_cast<Eigen::Index>(features));
    Eigen::Index f = 0;
    for (std::size_t j = 0; j < width; ++j) {
      if (j == layout.label_col) {
        labels.push_back(label_cell(row[j], t.lines[r], j + 1));
      } else if (j == layout.id_col) {
        d.names.push_back(row[j]);
      } else {
        x(0, f++) = number_cell(row[j], t.lines[r], j + 1);
      }
    }
    d.objects.push_back(std::move(x));
  }
  if (layout.label_col) d.labels = std::move(labels);
  return d;
}

void save_numeric_csv(const fs::path& path, const Dataset& data) {
  data.validate();
  const bool ids = !data.names.empty();
  const Eigen::Index p = data.objects.empty() ? 0 : data.objects.front().cols();
  std::vector<std::string> header;
  if (ids) header.emplace_back("id");
  for (Eigen::Index j = 0; j < p; ++j) header.push_back("x" + std::to_string(j + 1));
  if (data.labels) header.emplace_back("label");
  std::string out = join_row(header);
  for (std::size_t i = 0; i < data.size(); ++i) {
    std::vector<std::string> cells;
    if (ids) cells.push_back(data.names[i]);
    for (Eigen::Index j = 0; j < p; ++j) cells.push_back(format_double(data.objects[i](0, j)));
    if (data.labels) cells.push_back(std::to_string((*data.labels)[i]));
    out += join_row(cells);
  }
  write_text(path, out);
}

Dataset load_categorical_csv(const fs::path& path, const CsvOptions& options,
                             const std::optional<CategoricalSchema>& schema) {
  const Table t = parse_table(read_text(path));
  check_rectangular(t);
  CsvOptions opts = options;
  if (!opts.header) opts.header = true;  // strings cannot reveal a header
  const Layout layout = resolve_layout(t, opts, false);
  const std::size_t start = layout.header ? 1 : 0;
  const std::size_t width = t.rows.front().size();

  Dataset d;
  d.kind = DataKind::Categorical;
  CategoricalTable table;
  std::vector<std::string> attr_names;
  std::vector<std::size_t> attr_cols;
  for (std::size_t j = 0; j < width; ++j) {
    if (!is_feature(layout, j)) continue;
    attr_cols.push_back(j);
    attr_names.push_back(layout.header ? layout.names[j] : "a" + std::to_string(attr_cols.size()));
  }
  if (attr_cols.empty()) throw DataFormatError("no attribute columns");
  std::vector<int> labels;
  for (std::size_t r = start; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    std::vector<std::string> values;
    for (std::size_t j : attr_cols) {
      if (row[j].empty()) throw DataFormatError("missing categorical value", t.lines[r], j + 1);
      values.push_back(row[j]);
    }
    table.push_back(std::move(values));
    if (layout.label_col) labels.push_back(label_cell(row[*layout.label_col], t.lines[r], *layout.label_col + 1));
    if (layout.id_col) d.names.push_back(row[*layout.id_col]);
  }
  CategoricalSchema used = schema ? *schema : CategoricalSchema::infer(table, attr_names);
  if (used.attributes.size() != attr_cols.size()) {
    throw DataFormatError("schema has " + std::to_string(used.attributes.size()) + " attributes, file has " +
                          std::to_string(attr_cols.size()));
  }
  try {
    d.objects = encode_categorical(table, used);
  } catch (const DataFormatError& e) {
    // Map table coordinates back to file coordinates.
    std::optional<std::size_t> row;
    std::optional<std::size_t> col;
    if (e.row()) row = t.lines[start + *e.row() - 1];
    if (e.column()) col = attr_cols[*e.column() - 1] + 1;
    throw DataFormatError(e.what(), row, col);
  }
  d.schema = std::move(used);
  if (layout.label_col) d.labels = std::move(labels);
  return d;
}

void save_categorical_csv(const fs::path& path, const Dataset& data) {
  data.validate();
  if (!data.schema) throw std::invalid_argument("categorical dataset without a schema");
  const auto table = decode_categorical(data.objects, *data.schema);
  const bool ids = !data.names.empty();
  std::vector<std::string> header;
  if (ids) header.emplace_back("id");
  for (const auto& a : data.schema->attributes) header.push_back(a.name);
  if (data.labels) header.emplace_back("label");
  std::string out = join_row(header);
  for (std::size_t i = 0; i < table.size(); ++i) {
    std::vector<std::string> cells;
    if (ids) cells.push_back(data.names[i]);
    cells.insert(cells.end(), table[i].begin(), table[i].end());
    if (data.labels) cells.push_back(std::to_string((*data.labels)[i]));
    out += join_row(cells);
  }
  write_text(path, out);
}

Dataset load_timeseries_jsonl(const fs::path& path) {
  const std::string text = read_text(path);
  Dataset d;
  d.kind = DataKind::TimeSeries;
  std::vector<int> labels;
  std::size_t with_label = 0;
  std::size_t with_id = 0;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataFormatError(std::string("invalid JSON: ") + e.what(), lineno);
    }
    if (!j.is_object() || !j.contains("series") || !j["series"].is_array()) {
      throw DataFormatError("line lacks a \"series\" array", lineno);
    }
    const auto& s = j["series"];
    if (s.empty()) throw DataFormatError("empty series", lineno);
    const bool univariate = s.front().is_number();
    const std::size_t q = univariate ? 1 : (s.front().is_array() ? s.front().size() : 0);
    if (q == 0) throw DataFormatError("series frames must be numbers or non-empty arrays", lineno, 1);
    Object x(static_cast<Eigen::Index>(s.size()), static_cast<Eigen::Index>(q));
    for (std::size_t t = 0; t < s.size(); ++t) {
      const auto& frame = s[t];
      if (univariate) {
        if (!frame.is_number()) throw DataFormatError("non-numeric frame", lineno, t + 1);
        x(static_cast<Eigen::Index>(t), 0) = frame.get<double>();
        continue;
      }
      if (!frame.is_array() || frame.size() != q) {
        throw DataFormatError("ragged frame: expected " + std::to_string(q) + " channels", lineno, t + 1);
      }
      for (std::size_t k = 0; k < q; ++k) {
        if (!frame[k].is_number()) throw DataFormatError("non-numeric value", lineno, t + 1);
        x(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(k)) = frame[k].get<double>();
      }
    }
    if (!x.allFinite()) throw DataFormatError("non-finite value", lineno);
    if (!d.objects.empty() && x.cols() != d.objects.front().cols()) {
      throw DataFormatError("channel count differs from earlier series", lineno);
    }
    if (j.contains("label") && !j["label"].is_null()) {
      if (!j["label"].is_number_integer()) throw DataFormatError("label must be an integer", lineno);
      labels.push_back(j["label"].get<int>());
      ++with_label;
    }
    if (j.contains("id") && !j["id"].is_null()) {
      d.names.push_back(j["id"].is_string() ? j["id"].get<std::string>() : j["id"].dump());
      ++with_id;
    }
    d.objects.push_back(std::move(x));
  }
  if (d.objects.empty()) throw DataFormatError("no series in " + path.string());
  if (with_label != 0 && with_label != d.objects.size()) throw DataFormatError("labels present on only some lines");
  if (with_id != 0 && with_id != d.objects.size()) throw DataFormatError("ids present on only some lines");
  if (with_label) d.labels = std::move(labels);
  return d;
}

void save_timeseries_jsonl(const fs::path& path, const Dataset& data) {
  data.validate();
  std::string out;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Object& x = data.objects[i];
    nlohmann::ordered_json j;
    if (!data.names.empty()) j["id"] = data.names[i];
    if (data.labels) j["label"] = (*data.labels)[i];
    // Frames are written by hand so numbers use the shortest round-trip form.
    std::string line = j.dump();
    std::string series = "\"series\":[";
    for (Eigen::Index t = 0; t < x.rows(); ++t) {
      if (t) series += ',';
      series += '[';
      for (Eigen::Index k = 0; k < x.cols(); ++k) {
        if (k) series += ',';
        series += format_double(x(t, k));
      }
      series += ']';
    }
    series += ']';
    line.pop_back();
    if (line.size() > 1) line += ',';
    out += line + series + "}\n";
  }
  write_text(path, out);
}

Dataset load_timeseries_wide_csv(const fs::path& path, const CsvOptions& options) {
  Dataset d = load_numeric_csv(path, options);
  d.kind = DataKind::TimeSeries;
  for (auto& x : d.objects) x = Object(x.transpose());
  return d;
}

Dataset load_timeseries(const fs::path& path, const CsvOptions& options) {
  if (path.extension() == ".csv") return load_timeseries_wide_csv(path, options);
  return load_timeseries_jsonl(path);
}

std::vector<int> load_labels(const fs::path& path) {
  const Table t = parse_table(read_text(path));
  std::vector<int> labels;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    if (row.size() != 1) throw DataFormatError("label files hold one value per line", t.lines[r]);
    if (r == 0 && !to_number(row[0])) continue;
    labels.push_back(label_cell(row[0], t.lines[r], 1));
  }
  return labels;
}

void save_labels(const fs::path& path, const std::vector<int>& labels) {
  std::string out = "label\n";
  for (int l : labels) out += std::to_string(l) + '\n';
  write_text(path, out);
}

void save_masses_csv(const fs::path& path, const CredalPartition& partition, const std::vector<std::string>& names) {
  const bool ids = !names.empty();
  if (ids && names.size() != partition.num_objects()) throw std::invalid_argument("names do not match object count");
  std::vector<std::string> header;
  if (ids) header.emplace_back("id");
  for (const auto& label : partition.family().labels()) header.push_back(label);
  std::string out = join_row(header);
  for (std::size_t i = 0; i < partition.num_objects(); ++i) {
    std::vector<std::string> cells;
    if (ids) cells.push_back(names[i]);
    for (std::size_t k = 0; k < partition.family().size(); ++k) cells.push_back(format_double(partition.mass(i, k)));
    out += join_row(cells);
  }
  write_text(path, out);
}

CredalPartition load_masses_csv(const fs::path& path) {
  const Table t = parse_table(read_text(path));
  check_rectangular(t);
  if (t.rows.size() < 2) throw DataFormatError("mass file needs a header and at least one row");
  const auto& header = t.rows.front();
  std::vector<std::size_t> cols;
  std::vector<std::vector<int>> members;
  int c = 0;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == "id") continue;
    try {
      members.push_back(FocalSet::parse_members(header[j]));
    } catch (const std::exception& e) {
      throw DataFormatError(std::string("bad focal-set header: ") + e.what(), t.lines[0], j + 1);
    }
    for (int m : members.back()) c = std::max(c, m + 1);
    cols.push_back(j);
  }
  std::vector<FocalSet> sets;
  for (const auto& m : members) sets.push_back(FocalSet::from_members(m, c));
  FocalFamily family;
  try {
    family = FocalFamily::from_sets(c, sets);
  } catch (const std::invalid_argument& e) {
    throw DataFormatError(std::string("mass file header: ") + e.what(), t.lines[0]);
  }
  Eigen::MatrixXd masses(static_cast<Eigen::Index>(t.rows.size() - 1), static_cast<Eigen::Index>(family.size()));
  for (std::size_t r = 1; r < t.rows.size(); ++r) {
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const auto idx = *family.index_of(sets[k]);
      masses(static_cast<Eigen::Index>(r - 1), static_cast<Eigen::Index>(idx)) =
          number_cell(t.rows[r][cols[k]], t.lines[r], cols[k] + 1);
    }
  }
  for (Eigen::Index i = 0; i < masses.rows(); ++i) {
    const double sum = masses.row(i).sum();
    if ((masses.row(i).array() < -CredalPartition::kRowTolerance).any() ||
        std::abs(sum - 1.0) > 1e-6) {
      throw DataFormatError("masses are not a distribution", t.lines[static_cast<std::size_t>(i) + 1]);
    }
    // Text round-off can leave rows a hair outside the simplex.
    if (std::abs(sum - 1.0) > CredalPartition::kRowTolerance || masses.row(i).minCoeff() < 0.0) {
      masses.row(i) = masses.row(i).cwiseMax(0.0) / masses.row(i).cwiseMax(0.0).sum();
    }
  }
  return CredalPartition(std::move(family), std::move(masses));
}

}  // namespace softecm
