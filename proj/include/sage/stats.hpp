#pragma once

#include "sage/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

namespace sage {

// Per-coordinate running mean and sum of squared deviations (Welford).
template <typename Scalar>
class RunningMoments {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  explicit RunningMoments(Index dim = 0)
      : mean_(Vector::Zero(dim)), m2_(Vector::Zero(dim)) {}

  template <typename Derived>
  void add(const Eigen::MatrixBase<Derived>& x) {
    ++count_;
    const Vector delta = x - mean_;
    mean_ += delta / static_cast<Scalar>(count_);
    m2_.array() += delta.array() * (x - mean_).array();
  }

  Index dim() const { return mean_.size(); }
  std::int64_t count() const { return count_; }
  const Vector& mean() const { return mean_; }
  const Vector& m2() const { return m2_; }

  // Unbiased sample variance; zero until two samples have been seen.
  Vector variance() const {
    if (count_ < 2) return Vector::Zero(dim());
    return m2_ / static_cast<Scalar>(count_ - 1);
  }

  Vector std_error() const {
    if (count_ < 2) return Vector::Zero(dim());
    return (variance() / static_cast<Scalar>(count_)).array().sqrt().matrix();
  }

 private:
  std::int64_t count_ = 0;
  Vector mean_;
  Vector m2_;
};

template <typename Derived>
typename Derived::Scalar population_variance(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  const Scalar mu = x.mean();
  return (x.array() - mu).square().mean();
}

// Pearson correlation; empty when either side has zero variance.
template <typename DerivedA, typename DerivedB>
std::optional<double> pearson(const Eigen::MatrixBase<DerivedA>& a,
                              const Eigen::MatrixBase<DerivedB>& b) {
  if (a.size() != b.size() || a.size() < 2) return std::nullopt;
  const auto ca = (a.array() - a.mean()).eval();
  const auto cb = (b.array() - b.mean()).eval();
  const double saa = (ca * ca).sum();
  const double sbb = (cb * cb).sum();
  if (!(saa > 0.0) || !(sbb > 0.0)) return std::nullopt;
  return (ca * cb).sum() / std::sqrt(saa * sbb);
}

// Average ranks (ties share the mean rank), 1-based.
inline VectorXd average_ranks(const VectorXd& x) {
  const Index n = x.size();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index i, Index j) { return x(i) < x(j); });
  VectorXd ranks(n);
  Index i = 0;
  while (i < n) {
    Index j = i;
    while (j + 1 < n && x(order[j + 1]) == x(order[i])) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (Index k = i; k <= j; ++k) ranks(order[k]) = r;
    i = j + 1;
  }
  return ranks;
}

inline std::optional<double> spearman(const VectorXd& a, const VectorXd& b) {
  if (a.size() != b.size()) return std::nullopt;
  return pearson(average_ranks(a), average_ranks(b));
}

// Least-squares slope of y on x.
inline double fit_slope(const VectorXd& x, const VectorXd& y) {
  const auto cx = (x.array() - x.mean()).eval();
  const auto cy = (y.array() - y.mean()).eval();
  return (cx * cy).sum() / (cx * cx).sum();
}

}  // namespace sage
