#include "sage/shapley.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace sage {

VectorXd exact_shapley(const CooperativeGame& game) {
  if (game.players() > kMaxExactPlayers)
    throw Error("exact_shapley supports at most 16 players (got " + std::to_string(game.players()) + ")");
  return shapley_from_table(game.tabulate(), game.players());
}

VectorXd wls_shapley(const CooperativeGame& game, std::optional<Index> n_subsets, std::uint64_t seed) {
  const int d = game.players();
  const double empty = game(0);
  const double total = game(full_coalition(d)) - empty;
  if (d == 1) return VectorXd::Constant(1, total);

  std::vector<Coalition> coalitions;
  VectorXd weights;
  if (!n_subsets) {
    if (d > kMaxExactPlayers) throw Error("exhaustive wls_shapley supports at most 16 players");
    const Coalition full = full_coalition(d);
    for (Coalition s = 1; s < full; ++s) coalitions.push_back(s);
    weights.resize(static_cast<Index>(coalitions.size()));
    for (std::size_t k = 0; k < coalitions.size(); ++k)
      weights(static_cast<Index>(k)) = shapley_kernel(d, coalition_size(coalitions[k]));
  } else {
    if (*n_subsets < 1) throw Error("wls_shapley: n_subsets must be positive");
    std::vector<double> size_probs;
    for (int s = 1; s < d; ++s) size_probs.push_back(static_cast<double>(d - 1) / (s * (d - s)));
    std::discrete_distribution<int> pick_size(size_probs.begin(), size_probs.end());
    std::mt19937_64 rng(seed);
    std::vector<int> players(static_cast<std::size_t>(d));
    for (Index k = 0; k < *n_subsets; ++k) {
      const int size = pick_size(rng) + 1;
      std::iota(players.begin(), players.end(), 0);
      std::shuffle(players.begin(), players.end(), rng);
      Coalition s = 0;
      for (int j = 0; j < size; ++j) s |= Coalition{1} << players[static_cast<std::size_t>(j)];
      coalitions.push_back(s);
    }
    weights = VectorXd::Ones(*n_subsets);
  }

  const auto m = static_cast<Index>(coalitions.size());
  MatrixXd design = MatrixXd::Zero(m, d);
  VectorXd targets(m);
  for (Index k = 0; k < m; ++k) {
    const Coalition s = coalitions[static_cast<std::size_t>(k)];
    for (int i = 0; i < d; ++i)
      if (contains(s, i)) design(k, i) = 1.0;
    targets(k) = game(s) - empty;
  }
  return constrained_wls<double>(design, targets, weights, total);
}

}  // namespace sage
