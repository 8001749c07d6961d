#include "sage/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace sage {

std::string to_string(const Task& task) {
  return task.is_classification() ? "classification" : "regression";
}

Task parse_task(const std::string& name, int num_classes) {
  if (name == "regression") return Task::regression();
  if (name == "classification") return Task::classification(num_classes);
  throw Error("unknown task '" + name + "' (expected regression or classification)");
}

void Dataset::validate() const {
  if (features.rows() < 1) throw Error("dataset has no rows");
  if (features.cols() < 1) throw Error("dataset has no features");
  if (labels.size() != features.rows()) throw Error("label count does not match row count");
  if (static_cast<Index>(feature_names.size()) != features.cols())
    throw Error("feature name count does not match column count");
  if (!features.allFinite() || !labels.allFinite()) throw Error("dataset contains non-finite values");
  if (task.is_classification()) {
    if (task.num_classes < 2) throw Error("classification needs at least two classes");
    for (Index r = 0; r < labels.size(); ++r) {
      const double y = labels(r);
      if (y < 0 || y >= task.num_classes || y != std::floor(y))
        throw Error("label at row " + std::to_string(r) + " is not a valid class index");
    }
  }
}

Dataset Dataset::rows_subset(const std::vector<Index>& rows) const {
  Dataset out;
  out.features = features(rows, Eigen::all);
  out.labels = labels(rows);
  out.feature_names = feature_names;
  out.task = task;
  return out;
}

Dataset Dataset::columns_subset(const std::vector<Index>& cols) const {
  Dataset out;
  out.features = features(Eigen::all, cols);
  out.labels = labels;
  out.task = task;
  for (Index c : cols) out.feature_names.push_back(feature_names.at(static_cast<std::size_t>(c)));
  return out;
}

std::vector<std::string> default_feature_names(Index d) {
  std::vector<std::string> names;
  for (Index i = 0; i < d; ++i) names.push_back("x" + std::to_string(i + 1));
  return names;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

bool parse_finite(const std::string& text, double& value) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last && std::isfinite(value);
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path, const std::string& label_column,
                 const Task& task) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open CSV file: " + path.string() + " (file not found)");

  std::string line;
  if (!std::getline(in, line)) throw Error("CSV file is empty: " + path.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

  std::vector<std::string> header = split_line(line);
  for (auto& h : header) h = trim(h);
  const auto label_it = std::find(header.begin(), header.end(), label_column);
  if (label_it == header.end()) throw Error("unknown label column '" + label_column + "'");
  const auto label_pos = static_cast<std::size_t>(label_it - header.begin());
  if (header.size() < 2) throw Error("CSV needs at least one feature column besides the label");

  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    ++line_no;
    const auto cells = split_line(line);
    if (cells.size() != header.size())
      throw Error("row " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                  " cells, expected " + std::to_string(header.size()));
    std::vector<double> values(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (!parse_finite(trim(cells[c]), values[c]))
        throw Error("unparseable cell at row " + std::to_string(line_no) + ", column " + header[c] +
                    ": '" + cells[c] + "'");
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw Error("CSV file has a header but no data rows: " + path.string());

  const auto n = static_cast<Index>(rows.size());
  const auto d = static_cast<Index>(header.size() - 1);
  Dataset data;
  data.features.resize(n, d);
  data.labels.resize(n);
  data.task = task;
  for (std::size_t c = 0; c < header.size(); ++c)
    if (c != label_pos) data.feature_names.push_back(header[c]);
  for (Index r = 0; r < n; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    Index j = 0;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c == label_pos) {
        data.labels(r) = row[c];
      } else {
        data.features(r, j++) = row[c];
      }
    }
  }
  if (task.is_classification() && task.num_classes == 0) {
    data.task.num_classes = static_cast<int>(data.labels.maxCoeff()) + 1;
  }
  data.validate();
  return data;
}

DataSplit split(const Dataset& data, const SplitFractions& f, std::uint64_t seed) {
  for (double v : {f.train, f.val, f.test})
    if (!(v > 0.0 && v < 1.0)) throw Error("split fractions must each lie in (0, 1)");
  if (std::abs(f.train + f.val + f.test - 1.0) > 1e-9)
    throw Error("split fractions must sum to 1");
  const Index n = data.rows();
  if (n < 3) throw Error("split needs at least 3 rows");

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  const auto n_val = static_cast<Index>(std::floor(f.val * static_cast<double>(n)));
  const auto n_test = static_cast<Index>(std::floor(f.test * static_cast<double>(n)));
  const Index n_train = n - n_val - n_test;

  DataSplit out;
  out.indices[0].assign(order.begin(), order.begin() + n_train);
  out.indices[1].assign(order.begin() + n_train, order.begin() + n_train + n_val);
  out.indices[2].assign(order.begin() + n_train + n_val, order.end());
  out.train = data.rows_subset(out.indices[0]);
  out.val = data.rows_subset(out.indices[1]);
  out.test = data.rows_subset(out.indices[2]);
  return out;
}

Dataset corrupt_feature(const Dataset& data, Index feature, const ColumnTransform& t) {
  if (feature < 0 || feature >= data.cols())
    throw Error("feature index " + std::to_string(feature) + " out of range");
  if (!std::isfinite(t.amount)) throw Error("corruption amount must be finite");
  Dataset out = data;
  auto col = out.features.col(feature);
  if (t.kind == ColumnTransform::Kind::shift) {
    col.array() += t.amount;
  } else {
    col.array() *= t.amount;
  }
  return out;
}

}  // namespace sage
