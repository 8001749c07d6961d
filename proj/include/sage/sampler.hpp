#pragma once

#include "sage/dataset.hpp"
#include "sage/imputer.hpp"
#include "sage/loss.hpp"
#include "sage/model.hpp"
#include "sage/stats.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace sage {

struct SamplerParams {
  std::int64_t max_permutations = 1 << 20;
  std::int64_t min_permutations = 1024;
  double threshold = 0.01;
  std::int64_t check_interval = 256;
  std::uint64_t seed = 0;
  int workers = 1;
  // When false the sampler runs exactly max_permutations iterations.
  bool stop_on_convergence = true;

  void validate() const;
};

struct AttributionResult {
  std::vector<std::string> feature_names;
  VectorXd values;
  VectorXd std_error;
  std::int64_t n_samples = 0;
  bool converged = false;
  std::uint64_t model_evaluations = 0;
  std::string game = "sage";
  std::string loss;
  std::string imputer;
  std::uint64_t seed = 0;
};

// Running per-feature mean and variance of the loss increments.
class ConvergenceMonitor {
 public:
  explicit ConvergenceMonitor(Index features) : moments_(features) {}

  void add(const Eigen::Ref<const VectorXd>& deltas) { moments_.add(deltas); }

  std::int64_t count() const { return moments_.count(); }
  const VectorXd& values() const { return moments_.mean(); }
  // sigma_i, the per-sample standard deviation.
  VectorXd sigma() const { return moments_.variance().array().sqrt(); }
  VectorXd std_error() const { return moments_.std_error(); }

 private:
  RunningMoments<double> moments_;
};

// max_i sigma_i / sqrt(n) < t * (max_i phi_i - min_i phi_i); false for a
// zero range or n < 2.
bool check_convergence(const VectorXd& sigma, std::int64_t n, const VectorXd& values, double threshold);
bool check_convergence(const ConvergenceMonitor& monitor, double threshold);

// One walk through a permutation, reported in iteration order.
struct PermutationTrace {
  std::int64_t iteration = 0;
  Index row = 0;
  std::vector<Index> order;
  VectorXd deltas;  // indexed by feature
  double empty_loss = 0.0;
  double full_loss = 0.0;
};

using TraceCallback = std::function<void(const PermutationTrace&)>;

// Permutation sampling estimator of SAGE values: draws a labelled row and
// a uniform permutation per iteration, adds features one at a time and
// credits each with the resulting drop in loss.
AttributionResult sample_sage(const Model& model, const Imputer& imputer, const Dataset& data,
                              const LossFunction& loss, const SamplerParams& params,
                              const TraceCallback& trace = {});

// Per-row SAGE estimates (the per-instance game of each row), each run
// with its own seed derived from params.seed and the row index.
std::vector<AttributionResult> local_attributions(const Model& model, const Imputer& imputer,
                                                  const Dataset& data, const LossFunction& loss,
                                                  const SamplerParams& params,
                                                  const std::vector<Index>& rows);

// Averages the per-instance estimates over rows. Standard errors combine as
// sqrt(sum se_r^2) / R. Evaluations are summed.
AttributionResult average_attributions(const std::vector<AttributionResult>& locals);

// The indirect route: every row's per-instance game sampled to convergence,
// then averaged.
AttributionResult mean_shap_loss(const Model& model, const Imputer& imputer, const Dataset& data,
                                 const LossFunction& loss, const SamplerParams& per_instance_params);

}  // namespace sage
