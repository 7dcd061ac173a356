#include "ensnap/csv.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ensnap {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool is_missing_marker(const std::string& field) {
  return field.empty() || field == "?" || field == "NA" || field == "na";
}

enum class FieldKind { value, missing, unparsable };

FieldKind parse_field(const std::string& field, double* out) {
  if (is_missing_marker(field)) return FieldKind::missing;
  const char* begin = field.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') return FieldKind::unparsable;
  if (!std::isfinite(v)) return FieldKind::missing;
  *out = v;
  return FieldKind::value;
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(trim(current));
      current.clear();
    } else {
      current += ch;
    }
  }
  fields.push_back(trim(current));
  return fields;
}

RegressionDataset load_csv(const std::string& path, std::size_t target_column,
                           bool standardize) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_csv: cannot open " + path);

  std::vector<std::vector<double>> rows;
  std::size_t num_cols = 0;
  std::size_t line_number = 0;
  bool first_data_line = true;
  std::string line;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);

    std::vector<double> row(fields.size());
    bool missing = false, unparsable = false;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      switch (parse_field(fields[c], &row[c])) {
        case FieldKind::value:
          break;
        case FieldKind::missing:
          missing = true;
          break;
        case FieldKind::unparsable:
          unparsable = true;
          break;
      }
    }
    if (first_data_line && unparsable) {
      first_data_line = false;  // header row
      continue;
    }
    first_data_line = false;
    if (unparsable)
      throw std::runtime_error("load_csv: unparsable row at line " +
                               std::to_string(line_number) + " of " + path);
    if (missing) continue;

    if (num_cols == 0) {
      num_cols = row.size();
      if (num_cols < 2)
        throw std::runtime_error("load_csv: need at least two columns");
      if (target_column >= num_cols)
        throw std::out_of_range("load_csv: target column out of range");
    } else if (row.size() != num_cols) {
      throw std::runtime_error("load_csv: ragged row at line " +
                               std::to_string(line_number) + " of " + path);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("load_csv: no usable rows in " + path);

  RegressionDataset data;
  data.rows = rows.size();
  data.cols = num_cols - 1;
  data.name = path;
  data.inputs.reserve(data.rows * data.cols);
  data.targets.reserve(data.rows);
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < num_cols; ++c) {
      if (c == target_column)
        data.targets.push_back(row[c]);
      else
        data.inputs.push_back(row[c]);
    }
  }
  if (standardize) standardize_inputs(data);
  data.validate();
  return data;
}

void save_csv(const RegressionDataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_csv: cannot open " + path);
  out.precision(17);
  for (std::size_t r = 0; r < data.rows; ++r) {
    for (std::size_t c = 0; c < data.cols; ++c) out << data.input(r, c) << ',';
    out << data.targets[r] << '\n';
  }
  if (!out) throw std::runtime_error("save_csv: write failed for " + path);
}

}  // namespace ensnap
