#include "sage/evalsuite.hpp"

#include "sage/stats.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

namespace sage {

std::vector<std::vector<Index>> draw_subsets(Index d, int n_subsets, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Index> pick_k(1, d);
  std::vector<Index> order(static_cast<std::size_t>(d));
  std::vector<std::vector<Index>> out;
  for (int t = 0; t < n_subsets; ++t) {
    const Index k = pick_k(rng);
    std::iota(order.begin(), order.end(), Index{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<Index> subset(order.begin(), order.begin() + k);
    std::sort(subset.begin(), subset.end());
    out.push_back(std::move(subset));
  }
  return out;
}

CorrelationReport subset_retraining_correlation(const Trainer& trainer, const Dataset& train,
                                                const Dataset& test, const LossFunction& loss,
                                                const std::vector<ImportanceVector>& methods,
                                                int n_subsets, std::uint64_t seed) {
  const Index d = train.cols();
  for (const auto& m : methods)
    if (m.values.size() != d) throw Error("method '" + m.name + "' does not have one value per feature");
  if (n_subsets < 1) throw Error("n_subsets must be positive");

  CorrelationReport report;
  for (auto& subset : draw_subsets(d, n_subsets, seed)) {
    SubsetTrial trial;
    try {
      const ModelPtr model = trainer(train.columns_subset(subset));
      trial.test_loss = evaluate_risk(*model, test.columns_subset(subset), loss);
    } catch (const Error&) {
      ++report.skipped_trials;
      continue;
    }
    if (!std::isfinite(trial.test_loss)) {
      ++report.skipped_trials;
      continue;
    }
    for (const auto& m : methods) {
      double u = m.phi0;
      for (Index i : subset) u += m.values(i);
      trial.totals.push_back(u);
    }
    trial.subset = std::move(subset);
    report.trials.push_back(std::move(trial));
  }

  const auto n = static_cast<Index>(report.trials.size());
  VectorXd performance(n);
  for (Index t = 0; t < n; ++t) performance(t) = -report.trials[static_cast<std::size_t>(t)].test_loss;
  for (std::size_t m = 0; m < methods.size(); ++m) {
    VectorXd totals(n);
    for (Index t = 0; t < n; ++t) totals(t) = report.trials[static_cast<std::size_t>(t)].totals[m];
    MethodCorrelation mc{methods[m].name, pearson(performance, totals), spearman(performance, totals)};
    if (!mc.pearson)
      report.warnings.push_back("correlation undefined for method '" + methods[m].name + "' (zero variance)");
    report.methods.push_back(std::move(mc));
  }
  return report;
}

std::vector<Index> ranking_from_values(const VectorXd& values) {
  std::vector<Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return values(a) > values(b); });
  return order;
}

std::vector<SelectionPoint> feature_selection_curves(const Trainer& trainer, const Dataset& train,
                                                     const Dataset& test, const LossFunction& loss,
                                                     const std::vector<Index>& ranking,
                                                     const std::vector<int>& ks, SelectionDirection direction) {
  const Index d = train.cols();
  if (static_cast<Index>(ranking.size()) != d ||
      std::set<Index>(ranking.begin(), ranking.end()).size() != ranking.size())
    throw Error("ranking must be a permutation of the features");
  std::vector<SelectionPoint> out;
  for (int k : ks) {
    if (k < 1 || k > d) throw Error("selection size k=" + std::to_string(k) + " out of range");
    SelectionPoint p;
    p.k = k;
    if (direction == SelectionDirection::top) {
      p.features.assign(ranking.begin(), ranking.begin() + k);
    } else {
      p.features.assign(ranking.end() - k, ranking.end());
    }
    std::sort(p.features.begin(), p.features.end());
    const ModelPtr model = trainer(train.columns_subset(p.features));
    const Dataset reduced = test.columns_subset(p.features);
    p.test_loss = evaluate_risk(*model, reduced, loss);
    if (test.task.is_classification()) {
      const MatrixXd probs = model->predict_batch(reduced.features);
      Index correct = 0;
      for (Index r = 0; r < reduced.rows(); ++r) {
        Index best = 0;
        probs.row(r).maxCoeff(&best);
        if (best == reduced.label_class(r)) ++correct;
      }
      p.accuracy = static_cast<double>(correct) / static_cast<double>(reduced.rows());
    }
    out.push_back(std::move(p));
  }
  return out;
}

MonitorReport monitor_corruption(const Model& model, const Imputer& imputer, const LossFunction& loss,
                                 const Dataset& reference, const std::vector<CorruptedSplit>& corrupted,
                                 const SamplerParams& params) {
  if (corrupted.empty()) throw Error("monitor_corruption needs at least one split to compare");
  MonitorReport report;
  report.reference = sample_sage(model, imputer, reference, loss, params);
  for (const auto& split : corrupted) {
    if (split.data.feature_names != reference.feature_names)
      throw Error("split '" + split.name + "' does not share the reference feature names");
    SplitMonitor m;
    m.name = split.name;
    m.result = sample_sage(model, imputer, split.data, loss, params);
    m.deltas = m.result.values - report.reference.values;
    const VectorXd combined =
        (m.result.std_error.array().square() + report.reference.std_error.array().square()).sqrt();
    for (Index i = 0; i < m.deltas.size(); ++i)
      m.flagged.push_back(std::abs(m.deltas(i)) > report.flag_multiplier * combined(i));
    report.splits.push_back(std::move(m));
  }
  return report;
}

namespace {

CurvePoint score(const AttributionResult& estimate, const AttributionResult& reference, std::int64_t budget) {
  CurvePoint p;
  p.model_evaluations = estimate.model_evaluations;
  p.mse = (estimate.values - reference.values).squaredNorm() / static_cast<double>(reference.values.size());
  p.correlation = pearson(estimate.values, reference.values);
  p.budget = budget;
  return p;
}

std::vector<std::int64_t> sorted_unique(std::vector<std::int64_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

EfficiencyReport efficiency_comparison(const Model& model, const Imputer& imputer, const Dataset& data,
                                       const LossFunction& loss, const AttributionResult& reference,
                                       const EfficiencyOptions& options) {
  if (reference.values.size() != data.cols()) throw Error("efficiency_comparison: reference width mismatch");
  EfficiencyReport report;

  for (std::int64_t n : sorted_unique(options.sage_permutations)) {
    if (n < 1) continue;
    SamplerParams p;
    p.max_permutations = n;
    p.min_permutations = 1;
    p.stop_on_convergence = false;
    p.seed = options.seed;
    p.workers = options.workers;
    report.sage.push_back(score(sample_sage(model, imputer, data, loss, p), reference, n));
  }

  // Rows in a seeded order; the first `pilot_rows` set the per-row budget.
  std::vector<Index> rows(static_cast<std::size_t>(data.rows()));
  std::iota(rows.begin(), rows.end(), Index{0});
  std::mt19937_64 rng(derive_seed(options.seed, 0x5EEDULL));
  std::shuffle(rows.begin(), rows.end(), rng);

  const auto pilot_count = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(options.pilot_rows, 1)), 1,
                                                   rows.size());
  SamplerParams pilot = options.per_instance;
  pilot.seed = derive_seed(options.seed, 0x9170ULL);
  pilot.workers = options.workers;
  const auto pilots = local_attributions(model, imputer, data, loss, pilot,
                                         std::vector<Index>(rows.begin(), rows.begin() + static_cast<long>(pilot_count)));
  double mean_iters = 0.0;
  for (const auto& r : pilots) mean_iters += static_cast<double>(r.n_samples);
  mean_iters /= static_cast<double>(pilots.size());
  report.shap_permutations_per_row = std::max<std::int64_t>(2, std::llround(mean_iters));

  const auto budgets = sorted_unique(options.shap_rows);
  if (budgets.empty()) return report;
  const auto max_rows = static_cast<std::size_t>(std::min<std::int64_t>(budgets.back(), data.rows()));
  SamplerParams fixed;
  fixed.max_permutations = report.shap_permutations_per_row;
  fixed.min_permutations = 1;
  fixed.stop_on_convergence = false;
  fixed.seed = options.seed;
  fixed.workers = options.workers;
  const auto locals = local_attributions(model, imputer, data, loss, fixed,
                                         std::vector<Index>(rows.begin(), rows.begin() + static_cast<long>(max_rows)));
  std::size_t last = 0;
  for (std::int64_t b : budgets) {
    const auto count = static_cast<std::size_t>(std::min<std::int64_t>(b, static_cast<std::int64_t>(max_rows)));
    if (count < 1 || count == last) continue;
    last = count;
    const std::vector<AttributionResult> prefix(locals.begin(), locals.begin() + static_cast<long>(count));
    report.shap.push_back(score(average_attributions(prefix), reference, static_cast<std::int64_t>(count)));
  }
  return report;
}

std::optional<std::uint64_t> evaluations_to_reach(const std::vector<CurvePoint>& curve, double level) {
  for (const auto& p : curve)
    if (p.correlation && *p.correlation >= level) return p.model_evaluations;
  return std::nullopt;
}

}  // namespace sage
