#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace sgbn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// An n x m sample matrix with optional per-row class tags in {1, 2}.
// `standardized` is set by standardize(); row subsets of a standardized
// dataset keep the flag (their column moments drift only by sampling).
struct Dataset {
  Matrix values;                   // n rows (samples) x m columns (variables)
  std::vector<int> labels;         // empty, or one tag per row
  std::vector<std::string> names;  // column names; empty means x1..xm
  bool standardized = false;

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }

  bool has_labels() const { return !labels.empty(); }

  std::string column_name(Eigen::Index j) const {
    if (j < static_cast<Eigen::Index>(names.size())) return names[static_cast<std::size_t>(j)];
    return "x" + std::to_string(j + 1);
  }

  // Basic shape/finiteness checks; throws std::invalid_argument on violation.
  void validate() const;

  Dataset rows_where(const std::vector<int>& row_idx) const;
};

// Centers each column to mean zero and scales to unit sample standard
// deviation (n-1 divisor). Labels and column order are preserved.
// Throws std::invalid_argument naming the column on zero variance.
Dataset standardize(const Dataset& raw);

Dataset load_csv(const std::string& path);
void save_csv(const Dataset& d, const std::string& path);

}  // namespace sgbn
