#pragma once

#include "sage/game.hpp"
#include "sage/types.hpp"

#include <optional>

namespace sage {

inline constexpr int kMaxExactPlayers = 16;

// 1 / (d * C(d-1, s)): weight of a coalition of size s that excludes the
// player, in the Shapley average.
template <typename Scalar = double>
Scalar shapley_weight(int d, int s) {
  Scalar binom = 1;
  for (int k = 1; k <= s; ++k) binom = binom * static_cast<Scalar>(d - 1 - s + k) / static_cast<Scalar>(k);
  return Scalar(1) / (static_cast<Scalar>(d) * binom);
}

// Shapley kernel (d-1) / (C(d,s) s (d-s)) for 0 < s < d.
template <typename Scalar = double>
Scalar shapley_kernel(int d, int s) {
  Scalar binom = 1;
  for (int k = 1; k <= s; ++k) binom = binom * static_cast<Scalar>(d - s + k) / static_cast<Scalar>(k);
  return static_cast<Scalar>(d - 1) / (binom * static_cast<Scalar>(s) * static_cast<Scalar>(d - s));
}

// Shapley values from a full table of 2^d coalition values (bitmask index).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> shapley_from_table(
    const Eigen::MatrixBase<Derived>& table, int players) {
  using Scalar = typename Derived::Scalar;
  if (players < 1 || table.size() != (Index{1} << players))
    throw Error("shapley_from_table: table must have 2^d entries");
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> weights(players);
  for (int s = 0; s < players; ++s) weights(s) = shapley_weight<Scalar>(players, s);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> phi = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(players);
  const Coalition n = Coalition{1} << players;
  for (Coalition s = 0; s < n; ++s) {
    const int size = coalition_size(s);
    if (size == players) continue;
    const Scalar w = weights(size);
    for (int i = 0; i < players; ++i) {
      if (contains(s, i)) continue;
      phi(i) += w * (table(s | (Coalition{1} << i)) - table(s));
    }
  }
  return phi;
}

// Minimizes sum_k weight_k (design_k . phi - target_k)^2 subject to
// sum(phi) = total, through the KKT system. `design` rows are 0/1
// coalition indicators. Throws SingularSystemError when the KKT matrix is
// singular.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> constrained_wls(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& design,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& targets,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& weights, Scalar total) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Index d = design.cols();
  Matrix kkt = Matrix::Zero(d + 1, d + 1);
  Vector rhs = Vector::Zero(d + 1);
  kkt.topLeftCorner(d, d) = design.transpose() * weights.asDiagonal() * design;
  rhs.head(d) = design.transpose() * (weights.array() * targets.array()).matrix();
  kkt.col(d).head(d).setOnes();
  kkt.row(d).head(d).setOnes();
  rhs(d) = total;
  Eigen::FullPivLU<Matrix> lu(kkt);
  if (!lu.isInvertible()) throw SingularSystemError("weighted least squares: singular constrained system");
  return lu.solve(rhs).head(d);
}

// Exact Shapley values by enumerating all 2^d coalitions; d <= 16.
VectorXd exact_shapley(const CooperativeGame& game);

// Shapley values as the solution of the Shapley-kernel weighted least
// squares problem over proper nonempty coalitions, with the empty and full
// coalitions imposed as equality constraints. Exhaustive when `n_subsets`
// is empty; otherwise `n_subsets` coalitions drawn from the kernel
// distribution with unit weights.
VectorXd wls_shapley(const CooperativeGame& game, std::optional<Index> n_subsets = std::nullopt,
                     std::uint64_t seed = 0);

}  // namespace sage
