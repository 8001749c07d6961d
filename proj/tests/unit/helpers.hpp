#pragma once

#include "sage/game.hpp"
#include "sage/synthetic.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <string>

namespace testing {

using namespace sage;

// Shapley values by walking every permutation: the definition in its
// ordering form, independent of the subset-weight formula.
inline VectorXd permutation_shapley(const CooperativeGame& game) {
  const int d = game.players();
  std::vector<int> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), 0);
  VectorXd phi = VectorXd::Zero(d);
  long count = 0;
  do {
    Coalition s = 0;
    double prev = game(0);
    for (int i : order) {
      s |= Coalition{1} << i;
      const double cur = game(s);
      phi(i) += cur - prev;
      prev = cur;
    }
    ++count;
  } while (std::next_permutation(order.begin(), order.end()));
  return phi / static_cast<double>(count);
}

inline VectorXd random_table(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  VectorXd t(Index{1} << d);
  for (Index s = 0; s < t.size(); ++s) t(s) = n01(rng);
  t(0) = 0.0;
  return t;
}

inline Dataset make_dataset(MatrixXd x, VectorXd y, Task task = Task::regression()) {
  Dataset d;
  d.feature_names = default_feature_names(x.cols());
  d.features = std::move(x);
  d.labels = std::move(y);
  d.task = task;
  return d;
}

inline Dataset gaussian_regression(Index n, const std::vector<double>& betas, double noise, std::uint64_t seed) {
  return generate_synthetic(LinearGaussian{betas, noise}, n, seed).data;
}

// Fresh directory under the build tree, removed on construction.
struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& name) : path(std::filesystem::current_path() / ("tmp_" + name)) {
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  std::filesystem::path operator/(const std::string& f) const { return path / f; }
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace testing
