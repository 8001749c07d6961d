#include "sage/game.hpp"

#include "sage/stats.hpp"

namespace sage {

CooperativeGame::CooperativeGame(int players, Evaluator evaluator, GameInfo info)
    : players_(players), evaluator_(std::move(evaluator)), info_(std::move(info)) {
  if (players < 1 || players > kMaxGamePlayers) throw Error("game needs between 1 and 30 players");
  if (!evaluator_) throw Error("game needs an evaluator");
}

double CooperativeGame::operator()(Coalition s) const {
  if ((s & ~full_coalition(players_)) != 0) throw Error("coalition contains unknown players");
  return evaluator_(s);
}

VectorXd CooperativeGame::tabulate() const {
  if (players_ > 24) throw Error("tabulate: too many players");
  const Index n = Index{1} << players_;
  VectorXd values(n);
  for (Index s = 0; s < n; ++s) values(s) = evaluator_(static_cast<Coalition>(s));
  return values;
}

namespace {

void check_compatible(const Model& model, const Dataset& data, const LossFunction& loss) {
  if (model.num_features() != data.cols()) throw Error("game: model and data widths differ");
  if (model.task().is_classification() != data.task.is_classification())
    throw Error("game: model task does not match dataset task");
  if (!loss.compatible_with(data.task)) throw Error("game: loss " + loss.name() + " does not fit the task");
}

}  // namespace

VectorXd predictive_power_gains(const Model& model, const Imputer& imputer, const Dataset& data,
                                const LossFunction& loss, Coalition s) {
  const auto d = static_cast<int>(data.cols());
  const VectorXd empty_pred = imputer.mean_prediction(model);
  const FeatureMask present = mask_from_coalition(s, d);
  VectorXd gains(data.rows());
  for (Index r = 0; r < data.rows(); ++r) {
    const double y = data.labels(r);
    if (s == 0) {
      gains(r) = 0.0;
      continue;
    }
    gains(r) = loss(empty_pred, y) - loss(imputer.restricted_predict(model, data.features.row(r), present), y);
  }
  return gains;
}

CooperativeGame predictive_power_game(ModelPtr model, ImputerPtr imputer, Dataset data, LossFunction loss) {
  if (!model || !imputer) throw Error("predictive_power_game: null model or imputer");
  check_compatible(*model, data, loss);
  if (data.cols() > kMaxGamePlayers) throw Error("predictive_power_game: too many features for a game");
  GameInfo info{"predictive_power", loss.name(), imputer->name()};
  const auto d = static_cast<int>(data.cols());
  return CooperativeGame(
      d,
      [model = std::move(model), imputer = std::move(imputer), data = std::move(data), loss](Coalition s) {
        if (s == 0) return 0.0;
        return predictive_power_gains(*model, *imputer, data, loss, s).mean();
      },
      std::move(info));
}

CooperativeGame per_instance_game(ModelPtr model, ImputerPtr imputer, const RowVectorXd& x, double y,
                                  const Task& task, LossFunction loss) {
  Dataset one;
  one.features = x;
  one.labels = VectorXd::Constant(1, y);
  one.feature_names = default_feature_names(x.size());
  one.task = task;
  CooperativeGame game = predictive_power_game(std::move(model), std::move(imputer), std::move(one), loss);
  GameInfo info = game.info();
  info.game = "per_instance";
  return CooperativeGame(game.players(), [game](Coalition s) { return game(s); }, std::move(info));
}

CooperativeGame variance_game(ModelPtr model, ImputerPtr imputer, Dataset data) {
  if (!model || !imputer) throw Error("variance_game: null model or imputer");
  if (model->output_dim() != 1) throw Error("variance_game needs a scalar-output model");
  if (model->num_features() != data.cols()) throw Error("variance_game: model and data widths differ");
  GameInfo info{"variance", "", imputer->name()};
  const auto d = static_cast<int>(data.cols());
  return CooperativeGame(
      d,
      [model = std::move(model), imputer = std::move(imputer), data = std::move(data), d](Coalition s) {
        if (s == 0) return 0.0;
        const FeatureMask present = mask_from_coalition(s, d);
        VectorXd g(data.rows());
        for (Index r = 0; r < data.rows(); ++r)
          g(r) = imputer->restricted_predict(*model, data.features.row(r), present)(0);
        return population_variance(g);
      },
      std::move(info));
}

CooperativeGame tabulated_game(int players, const std::map<Coalition, double>& values) {
  if (players < 1 || players > 20) throw Error("tabulated game supports 1 to 20 players");
  const Index n = Index{1} << players;
  VectorXd table(n);
  for (Index s = 0; s < n; ++s) {
    const auto it = values.find(static_cast<Coalition>(s));
    if (it == values.end()) throw Error("tabulated game: missing value for coalition " + std::to_string(s));
    table(s) = it->second;
  }
  if (static_cast<Index>(values.size()) != n) throw Error("tabulated game: table has coalitions outside the player set");
  return tabulated_game(players, std::move(table));
}

CooperativeGame tabulated_game(int players, VectorXd values) {
  if (players < 1 || players > 20) throw Error("tabulated game supports 1 to 20 players");
  if (values.size() != (Index{1} << players)) throw Error("tabulated game: table must have 2^d entries");
  return CooperativeGame(players, [values = std::move(values)](Coalition s) { return values(s); },
                         GameInfo{"tabulated", "", ""});
}

}  // namespace sage
