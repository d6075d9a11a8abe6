#include "sgbn/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sgbn {

void Dataset::validate() const {
  if (rows() < 2) throw std::invalid_argument("dataset needs at least 2 samples");
  if (cols() < 1) throw std::invalid_argument("dataset needs at least 1 variable");
  if (!values.allFinite()) throw std::invalid_argument("dataset contains non-finite entries");
  if (!labels.empty()) {
    if (static_cast<Eigen::Index>(labels.size()) != rows())
      throw std::invalid_argument("label count does not match row count");
    for (int y : labels)
      if (y != 1 && y != 2) throw std::invalid_argument("labels must be 1 or 2");
  }
}

Dataset Dataset::rows_where(const std::vector<int>& row_idx) const {
  Dataset out;
  out.values.resize(static_cast<Eigen::Index>(row_idx.size()), cols());
  out.names = names;
  out.standardized = standardized;
  for (std::size_t k = 0; k < row_idx.size(); ++k) {
    out.values.row(static_cast<Eigen::Index>(k)) = values.row(row_idx[k]);
    if (!labels.empty()) out.labels.push_back(labels[static_cast<std::size_t>(row_idx[k])]);
  }
  return out;
}

Dataset standardize(const Dataset& raw) {
  raw.validate();
  const Eigen::Index n = raw.rows();
  const Eigen::Index m = raw.cols();
  Dataset out = raw;
  for (Eigen::Index j = 0; j < m; ++j) {
    const double mean = raw.values.col(j).mean();
    const double ss = (raw.values.col(j).array() - mean).square().sum();
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (!(sd > 0.0))
      throw std::invalid_argument("column " + std::to_string(j + 1) + " (" +
                                  raw.column_name(j) + ") has zero variance");
    out.values.col(j) = (raw.values.col(j).array() - mean) / sd;
  }
  out.standardized = true;
  return out;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_number(const std::string& s, std::size_t line_no) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("line " + std::to_string(line_no) + ": cannot parse '" + s + "'");
  }
}

}  // namespace

Dataset load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument(path + ": empty file");
  std::vector<std::string> header = split_line(line);
  bool has_label = !header.empty() && header.back() == "label";
  const std::size_t m = header.size() - (has_label ? 1 : 0);
  if (m == 0) throw std::invalid_argument(path + ": no variable columns");

  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields = split_line(line);
    if (fields.size() != header.size())
      throw std::invalid_argument(path + ": line " + std::to_string(line_no) +
                                  " has " + std::to_string(fields.size()) +
                                  " fields, expected " + std::to_string(header.size()));
    std::vector<double> row(m);
    for (std::size_t j = 0; j < m; ++j) row[j] = parse_number(fields[j], line_no);
    rows.push_back(std::move(row));
    if (has_label) {
      const double y = parse_number(fields.back(), line_no);
      if (y != 1.0 && y != 2.0)
        throw std::invalid_argument(path + ": line " + std::to_string(line_no) +
                                    ": label must be 1 or 2");
      labels.push_back(static_cast<int>(y));
    }
  }

  Dataset d;
  d.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < m; ++j)
      d.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  d.labels = std::move(labels);
  d.names.assign(header.begin(), header.begin() + static_cast<std::ptrdiff_t>(m));
  d.validate();
  return d;
}

void save_csv(const Dataset& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open " + path + " for writing");
  for (Eigen::Index j = 0; j < d.cols(); ++j) {
    if (j > 0) out << ',';
    out << d.column_name(j);
  }
  if (d.has_labels()) out << ",label";
  out << '\n';
  char buf[64];
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    for (Eigen::Index j = 0; j < d.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", d.values(i, j));
      if (j > 0) out << ',';
      out << buf;
    }
    if (d.has_labels()) out << ',' << d.labels[static_cast<std::size_t>(i)];
    out << '\n';
  }
}

}  // namespace sgbn
