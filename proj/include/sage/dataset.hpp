#pragma once

#include "sage/types.hpp"

#include <array>
#include <filesystem>
#include <string>
#include <tuple>
#include <vector>

namespace sage {

// Empirical distribution p(X, Y): an N x d feature matrix with labels.
// Classification labels are class indices stored as doubles.
struct Dataset {
  MatrixXd features;
  VectorXd labels;
  std::vector<std::string> feature_names;
  Task task;

  Index rows() const { return features.rows(); }
  Index cols() const { return features.cols(); }

  // Throws Error when any invariant is broken (shape, finiteness, labels).
  void validate() const;

  Dataset rows_subset(const std::vector<Index>& rows) const;
  Dataset columns_subset(const std::vector<Index>& cols) const;
  Dataset row(Index r) const { return rows_subset({r}); }

  int label_class(Index r) const { return static_cast<int>(labels(r)); }
};

std::vector<std::string> default_feature_names(Index d);

Dataset load_csv(const std::filesystem::path& path, const std::string& label_column,
                 const Task& task);

struct SplitFractions {
  double train = 0.8;
  double val = 0.1;
  double test = 0.1;
};

struct DataSplit {
  Dataset train;
  Dataset val;
  Dataset test;
  std::array<std::vector<Index>, 3> indices;
};

// Seeded shuffle then floor-rounded sizes; the remainder goes to train.
DataSplit split(const Dataset& data, const SplitFractions& fractions, std::uint64_t seed);

struct ColumnTransform {
  enum class Kind { shift, scale };
  Kind kind = Kind::shift;
  double amount = 0.0;

  static ColumnTransform shift(double c) { return {Kind::shift, c}; }
  static ColumnTransform scale(double c) { return {Kind::scale, c}; }
};

Dataset corrupt_feature(const Dataset& data, Index feature, const ColumnTransform& transform);

}  // namespace sage
