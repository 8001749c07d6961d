#pragma once

#include "sage/dataset.hpp"
#include "sage/imputer.hpp"
#include "sage/loss.hpp"
#include "sage/model.hpp"

#include <functional>
#include <map>
#include <string>

namespace sage {

struct GameInfo {
  std::string game = "custom";
  std::string loss;
  std::string imputer;
};

// Set function over coalitions of `players` features, S -> w(S).
class CooperativeGame {
 public:
  using Evaluator = std::function<double(Coalition)>;

  CooperativeGame(int players, Evaluator evaluator, GameInfo info = {});

  int players() const { return players_; }
  const GameInfo& info() const { return info_; }

  double operator()(Coalition s) const;

  // Values of every coalition, indexed by bitmask.
  VectorXd tabulate() const;

 private:
  int players_;
  Evaluator evaluator_;
  GameInfo info_;
};

// v_f(S): mean over rows of l(f_empty, y) - l(f_S(x_S), y).
CooperativeGame predictive_power_game(ModelPtr model, ImputerPtr imputer, Dataset data, LossFunction loss);

// Per-row terms of predictive_power_game at coalition `s`.
VectorXd predictive_power_gains(const Model& model, const Imputer& imputer, const Dataset& data,
                                const LossFunction& loss, Coalition s);

// v_{f,x,y}(S) for a single labelled row.
CooperativeGame per_instance_game(ModelPtr model, ImputerPtr imputer, const RowVectorXd& x, double y,
                                  const Task& task, LossFunction loss);

// w_f(S) = Var(E[f(X) | X_S]) with the empirical (1/N) variance over rows.
CooperativeGame variance_game(ModelPtr model, ImputerPtr imputer, Dataset data);

// Exact lookup. The vector form is indexed by bitmask and has 2^d entries.
CooperativeGame tabulated_game(int players, const std::map<Coalition, double>& values);
CooperativeGame tabulated_game(int players, VectorXd values);

}  // namespace sage
