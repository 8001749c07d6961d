#pragma once

#include "sage/baselines.hpp"
#include "sage/dataset.hpp"
#include "sage/imputer.hpp"
#include "sage/loss.hpp"
#include "sage/model.hpp"
#include "sage/sampler.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sage {

// An importance vector under test, with its additive constant.
struct ImportanceVector {
  std::string name;
  VectorXd values;
  double phi0 = 0.0;
};

struct SubsetTrial {
  std::vector<Index> subset;
  double test_loss = 0.0;
  std::vector<double> totals;  // u(S) per method, in method order
};

struct MethodCorrelation {
  std::string name;
  std::optional<double> pearson;
  std::optional<double> spearman;
};

struct CorrelationReport {
  std::vector<SubsetTrial> trials;
  std::vector<MethodCorrelation> methods;
  int skipped_trials = 0;
  std::vector<std::string> warnings;
};

// Random coalitions: k uniform on 1..d, then a uniform k-subset.
std::vector<std::vector<Index>> draw_subsets(Index d, int n_subsets, std::uint64_t seed);

// Retrains on each drawn subset and correlates performance (-test loss)
// with every method's u(S).
CorrelationReport subset_retraining_correlation(const Trainer& trainer, const Dataset& train,
                                                const Dataset& test, const LossFunction& loss,
                                                const std::vector<ImportanceVector>& methods,
                                                int n_subsets, std::uint64_t seed);

// Features ordered by decreasing value (stable for ties).
std::vector<Index> ranking_from_values(const VectorXd& values);

struct SelectionPoint {
  int k = 0;
  std::vector<Index> features;
  double test_loss = 0.0;
  std::optional<double> accuracy;  // classification only
};

enum class SelectionDirection { top, bottom };

std::vector<SelectionPoint> feature_selection_curves(const Trainer& trainer, const Dataset& train,
                                                     const Dataset& test, const LossFunction& loss,
                                                     const std::vector<Index>& ranking,
                                                     const std::vector<int>& ks, SelectionDirection direction);

struct CorruptedSplit {
  std::string name;
  Dataset data;
};

struct SplitMonitor {
  std::string name;
  AttributionResult result;
  VectorXd deltas;  // split value - reference value
  std::vector<bool> flagged;
};

struct MonitorReport {
  AttributionResult reference;
  std::vector<SplitMonitor> splits;
  double flag_multiplier = 3.0;
};

// Runs the sampler on the reference and each split with a shared seed and
// imputer; flags |delta| > 3 * sqrt(se_ref^2 + se_split^2).
MonitorReport monitor_corruption(const Model& model, const Imputer& imputer, const LossFunction& loss,
                                 const Dataset& reference, const std::vector<CorruptedSplit>& corrupted,
                                 const SamplerParams& params);

struct CurvePoint {
  std::uint64_t model_evaluations = 0;
  double mse = 0.0;
  std::optional<double> correlation;
  std::int64_t budget = 0;  // permutations (direct) or explained rows (indirect)
};

struct EfficiencyOptions {
  std::vector<std::int64_t> sage_permutations{16, 32, 64, 128, 256, 512, 1024, 2048, 4096, 8192};
  std::vector<std::int64_t> shap_rows{1, 2, 4, 8, 16, 32, 64, 128, 256, 512};
  int pilot_rows = 10;
  SamplerParams per_instance;  // convergence settings for local explanations
  std::uint64_t seed = 0;
  int workers = 1;
};

struct EfficiencyReport {
  std::vector<CurvePoint> sage;
  std::vector<CurvePoint> shap;
  std::int64_t shap_permutations_per_row = 0;
};

// Convergence of the direct estimator against averaging local explanations,
// both scored against `reference` by MSE and Pearson correlation.
EfficiencyReport efficiency_comparison(const Model& model, const Imputer& imputer, const Dataset& data,
                                       const LossFunction& loss, const AttributionResult& reference,
                                       const EfficiencyOptions& options);

// Evaluations at the first point whose correlation reaches `level`.
std::optional<std::uint64_t> evaluations_to_reach(const std::vector<CurvePoint>& curve, double level);

}  // namespace sage
