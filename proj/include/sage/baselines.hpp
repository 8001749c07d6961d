#pragma once

#include "sage/dataset.hpp"
#include "sage/loss.hpp"
#include "sage/model.hpp"
#include "sage/synthetic.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sage {

// Additive importance scores phi_1..phi_d with the constant phi_0 that makes
// u(S) = phi_0 + sum_{i in S} phi_i track predictive power on the method's
// privileged coalitions.
struct BaselineResult {
  std::string method;
  std::vector<std::string> feature_names;
  VectorXd values;
  std::optional<VectorXd> std_error;  // repeat-based methods only
  double phi0 = 0.0;
  int n_repeats = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;

  // phi_0 + sum_{i in S} phi_i.
  double additive_proxy(const std::vector<Index>& subset) const;
};

inline const std::vector<std::string>& baseline_methods() {
  static const std::vector<std::string> names{"ablation",   "permutation", "conditional_permutation",
                                              "mean",       "univariate",  "correlation"};
  return names;
}

// Leave-one-out retraining: phi_i = risk(f_{-i}) - risk(f) on `test`.
BaselineResult feature_ablation(const Trainer& trainer, const Dataset& train, const Dataset& test,
                                const LossFunction& loss);

// phi_i = mean over repeats of risk with column i shuffled, minus risk(f).
BaselineResult permutation_test(const Model& model, const Dataset& data, const LossFunction& loss,
                                int n_repeats = 10, std::uint64_t seed = 0);

// As permutation_test but x_i is redrawn from p(X_i | X_{-i}) of the true
// distribution, with the expectation outside the loss.
BaselineResult conditional_permutation_test(const Model& model, const Dataset& data,
                                            const GroundTruth& truth, const LossFunction& loss,
                                            int n_repeats = 10, std::uint64_t seed = 0);

// phi_i = risk with column i set to its mean, minus risk(f).
BaselineResult mean_importance(const Model& model, const Dataset& data, const LossFunction& loss);

// phi_i = optimal constant risk - risk of a model trained on feature i
// alone; phi_0 = 0.
BaselineResult univariate_scores(const Trainer& trainer, const Dataset& train, const Dataset& test,
                                 const LossFunction& loss);

// phi_i = Corr(X_i, Y)^2; zero (with a warning) for constant columns.
BaselineResult squared_correlation(const Dataset& data);

}  // namespace sage
