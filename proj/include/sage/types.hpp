#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sage {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::RowVectorXd;
using Eigen::VectorXd;

// Base exception for every recoverable failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A linear system that could not be solved (rank deficient Gram matrix,
// singular KKT system).
class SingularSystemError : public Error {
 public:
  using Error::Error;
};

struct Task {
  enum class Kind { regression, classification };

  Kind kind = Kind::regression;
  int num_classes = 0;  // only meaningful for classification

  static Task regression() { return {Kind::regression, 0}; }
  static Task classification(int k) { return {Kind::classification, k}; }

  bool is_classification() const { return kind == Kind::classification; }
  Index output_dim() const { return is_classification() ? num_classes : 1; }

  friend bool operator==(const Task&, const Task&) = default;
};

std::string to_string(const Task& task);
Task parse_task(const std::string& name, int num_classes = 0);

// Which features are present. Games index coalitions as bitmasks, the
// sampler works on dense masks so it is not limited to 32 features.
using FeatureMask = Eigen::Array<bool, Eigen::Dynamic, 1>;
using Coalition = std::uint32_t;

inline constexpr int kMaxGamePlayers = 30;

inline FeatureMask mask_from_coalition(Coalition s, int d) {
  FeatureMask m(d);
  for (int i = 0; i < d; ++i) m(i) = ((s >> i) & 1U) != 0;
  return m;
}

inline Coalition full_coalition(int d) {
  return d >= 32 ? ~Coalition{0} : ((Coalition{1} << d) - 1U);
}

inline bool contains(Coalition s, int i) { return ((s >> i) & 1U) != 0; }

inline int coalition_size(Coalition s) { return __builtin_popcount(s); }

// Derives an independent 64-bit seed for work item `index` of a stream so
// that results do not depend on which worker handles the item.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed * 0x9E3779B97F4A7C15ULL + index + 0x632BE59BD9B4E019ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace sage
