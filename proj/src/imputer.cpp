#include "sage/imputer.hpp"

#include <numeric>
#include <random>

namespace sage {

namespace {

// Averages taken relative to the first row, so a batch of identical
// predictions averages to exactly that prediction. This keeps the increment
// of a feature the model ignores at exactly zero.
VectorXd anchored_mean(const MatrixXd& preds) {
  const RowVectorXd anchor = preds.row(0);
  return (anchor + (preds.rowwise() - anchor).colwise().mean()).transpose();
}

VectorXd anchored_weighted(const MatrixXd& preds, const VectorXd& weights) {
  const RowVectorXd anchor = preds.row(0);
  return anchor.transpose() + (preds.rowwise() - anchor).transpose() * weights;
}

}  // namespace

VectorXd Imputer::restricted_predict(const Model& model, const Eigen::Ref<const RowVectorXd>& x,
                                     const FeatureMask& present) const {
  if (x.size() != model.num_features() || present.size() != x.size())
    throw Error("restricted_predict: row width does not match the model");
  if (present.all()) return model.predict(x);
  if (!present.any()) return mean_prediction(model);
  return impute(model, x, present);
}

MarginalImputer::MarginalImputer(MatrixXd background) : background_(std::move(background)) {
  if (background_.rows() < 1) throw Error("marginal imputer needs a nonempty background set");
}

VectorXd MarginalImputer::mean_prediction(const Model& model) const {
  return anchored_mean(model.predict_batch(background_));
}

VectorXd MarginalImputer::impute(const Model& model, const Eigen::Ref<const RowVectorXd>& x,
                                 const FeatureMask& present) const {
  if (background_.cols() != x.size()) throw Error("marginal imputer: background width mismatch");
  MatrixXd batch = background_;
  for (Index i = 0; i < x.size(); ++i)
    if (present(i)) batch.col(i).setConstant(x(i));
  return anchored_mean(model.predict_batch(batch));
}

MeanImputer::MeanImputer(RowVectorXd means) : means_(std::move(means)) {
  if (means_.size() < 1 || !means_.allFinite()) throw Error("mean imputer needs finite column means");
}

VectorXd MeanImputer::mean_prediction(const Model& model) const { return model.predict(means_); }

VectorXd MeanImputer::impute(const Model& model, const Eigen::Ref<const RowVectorXd>& x,
                             const FeatureMask& present) const {
  if (means_.size() != x.size()) throw Error("mean imputer: width mismatch");
  RowVectorXd row = present.transpose().select(x, means_);
  return model.predict(row);
}

VectorXd ConditionalImputer::mean_prediction(const Model& model) const {
  const FeatureMask none = FeatureMask::Constant(truth_.num_features(), false);
  return impute(model, RowVectorXd::Zero(truth_.num_features()), none);
}

VectorXd ConditionalImputer::impute(const Model& model, const Eigen::Ref<const RowVectorXd>& x,
                                    const FeatureMask& present) const {
  const ConditionalSupport support = truth_.conditional(x, present);
  const MatrixXd preds = model.predict_batch(support.rows);
  return anchored_weighted(preds, support.weights);
}

MatrixXd draw_background(const Dataset& data, Index size, std::uint64_t seed) {
  if (size < 1) throw Error("background size must be positive");
  std::vector<Index> order(static_cast<std::size_t>(data.rows()));
  std::iota(order.begin(), order.end(), Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(static_cast<std::size_t>(std::min(size, data.rows())));
  return data.features(order, Eigen::all);
}

}  // namespace sage
