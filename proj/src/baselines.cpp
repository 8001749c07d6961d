#include "sage/baselines.hpp"

#include "sage/stats.hpp"

#include <numeric>
#include <random>

namespace sage {

double BaselineResult::additive_proxy(const std::vector<Index>& subset) const {
  double u = phi0;
  for (Index i : subset) u += values(i);
  return u;
}

namespace {

BaselineResult make_result(std::string method, const Dataset& data) {
  BaselineResult r;
  r.method = std::move(method);
  r.feature_names = data.feature_names;
  r.values = VectorXd::Zero(data.cols());
  return r;
}

// phi_0 for exclusion-type methods: optimal constant risk - risk(f) - sum phi.
void set_exclusion_phi0(BaselineResult& r, const Dataset& data, const LossFunction& loss, double full_risk) {
  r.phi0 = loss.optimal_constant_risk(data.labels, data.task.num_classes) - full_risk - r.values.sum();
}

std::vector<Index> all_but(Index d, Index skip) {
  std::vector<Index> cols;
  for (Index c = 0; c < d; ++c)
    if (c != skip) cols.push_back(c);
  return cols;
}

// Mean and standard error over repeats of risk with column i replaced.
template <typename Fill>
void repeat_column_risk(const Model& model, const Dataset& data, const LossFunction& loss, int n_repeats,
                        double full_risk, Fill&& fill, BaselineResult& out) {
  const Index d = data.cols();
  VectorXd se(d);
  for (Index i = 0; i < d; ++i) {
    RunningMoments<double> moments(1);
    for (int rep = 0; rep < n_repeats; ++rep) {
      Dataset modified = data;
      fill(modified, i, rep);
      moments.add(VectorXd::Constant(1, evaluate_risk(model, modified, loss) - full_risk));
    }
    out.values(i) = moments.mean()(0);
    se(i) = moments.std_error()(0);
  }
  out.std_error = se;
  out.n_repeats = n_repeats;
}

}  // namespace

BaselineResult feature_ablation(const Trainer& trainer, const Dataset& train, const Dataset& test,
                                const LossFunction& loss) {
  if (train.cols() < 2) throw Error("feature_ablation needs at least two features");
  if (train.cols() != test.cols()) throw Error("feature_ablation: train and test widths differ");
  BaselineResult r = make_result("ablation", test);
  const ModelPtr full = trainer(train);
  const double full_risk = evaluate_risk(*full, test, loss);
  for (Index i = 0; i < train.cols(); ++i) {
    const auto cols = all_but(train.cols(), i);
    const ModelPtr reduced = trainer(train.columns_subset(cols));
    r.values(i) = evaluate_risk(*reduced, test.columns_subset(cols), loss) - full_risk;
  }
  set_exclusion_phi0(r, test, loss, full_risk);
  return r;
}

BaselineResult permutation_test(const Model& model, const Dataset& data, const LossFunction& loss,
                                int n_repeats, std::uint64_t seed) {
  if (n_repeats < 1) throw Error("permutation_test needs n_repeats >= 1");
  BaselineResult r = make_result("permutation", data);
  r.seed = seed;
  const double full_risk = evaluate_risk(model, data, loss);
  std::vector<Index> order(static_cast<std::size_t>(data.rows()));
  repeat_column_risk(
      model, data, loss, n_repeats, full_risk,
      [&](Dataset& modified, Index i, int rep) {
        std::iota(order.begin(), order.end(), Index{0});
        std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(i * n_repeats + rep)));
        std::shuffle(order.begin(), order.end(), rng);
        modified.features.col(i) = data.features.col(i)(order);
      },
      r);
  set_exclusion_phi0(r, data, loss, full_risk);
  return r;
}

BaselineResult conditional_permutation_test(const Model& model, const Dataset& data,
                                            const GroundTruth& truth, const LossFunction& loss,
                                            int n_repeats, std::uint64_t seed) {
  if (n_repeats < 1) throw Error("conditional_permutation_test needs n_repeats >= 1");
  if (truth.num_features() != data.cols()) throw Error("conditional_permutation_test: ground truth width mismatch");
  BaselineResult r = make_result("conditional_permutation", data);
  r.seed = seed;
  const double full_risk = evaluate_risk(model, data, loss);
  repeat_column_risk(
      model, data, loss, n_repeats, full_risk,
      [&](Dataset& modified, Index i, int rep) {
        std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(i * n_repeats + rep)));
        for (Index row = 0; row < data.rows(); ++row)
          modified.features(row, i) = truth.sample_feature_given_rest(i, data.features.row(row), rng);
      },
      r);
  set_exclusion_phi0(r, data, loss, full_risk);
  return r;
}

BaselineResult mean_importance(const Model& model, const Dataset& data, const LossFunction& loss) {
  BaselineResult r = make_result("mean", data);
  const double full_risk = evaluate_risk(model, data, loss);
  const RowVectorXd means = data.features.colwise().mean();
  for (Index i = 0; i < data.cols(); ++i) {
    Dataset modified = data;
    modified.features.col(i).setConstant(means(i));
    r.values(i) = evaluate_risk(model, modified, loss) - full_risk;
  }
  set_exclusion_phi0(r, data, loss, full_risk);
  return r;
}

BaselineResult univariate_scores(const Trainer& trainer, const Dataset& train, const Dataset& test,
                                 const LossFunction& loss) {
  if (train.cols() < 1) throw Error("univariate_scores needs at least one feature");
  if (train.cols() != test.cols()) throw Error("univariate_scores: train and test widths differ");
  BaselineResult r = make_result("univariate", test);
  const double constant_risk = loss.optimal_constant_risk(test.labels, test.task.num_classes);
  for (Index i = 0; i < train.cols(); ++i) {
    const ModelPtr g = trainer(train.columns_subset({i}));
    r.values(i) = constant_risk - evaluate_risk(*g, test.columns_subset({i}), loss);
  }
  r.phi0 = 0.0;
  return r;
}

BaselineResult squared_correlation(const Dataset& data) {
  if (data.task.is_classification()) throw Error("squared_correlation needs a regression dataset");
  BaselineResult r = make_result("correlation", data);
  for (Index i = 0; i < data.cols(); ++i) {
    const auto corr = pearson(data.features.col(i), data.labels);
    if (!corr) {
      r.warnings.push_back("feature '" + data.feature_names[static_cast<std::size_t>(i)] +
                           "' or the label has zero variance; score set to 0");
      continue;
    }
    r.values(i) = *corr * *corr;
  }
  r.phi0 = 0.0;
  return r;
}

}  // namespace sage
