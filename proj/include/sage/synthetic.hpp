#pragma once

#include "sage/dataset.hpp"
#include "sage/types.hpp"

#include <optional>
#include <random>
#include <utility>
#include <variant>
#include <vector>

namespace sage {

struct DiscreteOutcome {
  std::vector<int> x;
  int y = 0;
  double p = 0.0;
};

// Joint probability table over integer-valued features and a class label.
class DiscreteJoint {
 public:
  DiscreteJoint() = default;
  // Merges duplicate outcomes and drops zero-probability rows.
  explicit DiscreteJoint(std::vector<DiscreteOutcome> outcomes);

  int num_features() const { return num_features_; }
  int num_classes() const { return num_classes_; }
  const std::vector<DiscreteOutcome>& outcomes() const { return outcomes_; }

  // p(x) over the feature support, one entry per distinct x.
  const std::vector<std::pair<std::vector<int>, double>>& feature_marginal() const {
    return feature_marginal_;
  }

  VectorXd class_marginal() const;

  // p(y | X_S = x_S); empty when x_S has zero probability.
  std::optional<VectorXd> class_given(const RowVectorXd& x, Coalition s) const;

  // H(Y | X_S) in nats.
  double conditional_entropy(Coalition s) const;

 private:
  std::vector<DiscreteOutcome> outcomes_;
  std::vector<std::pair<std::vector<int>, double>> feature_marginal_;
  int num_features_ = 0;
  int num_classes_ = 0;
};

// I(Y; X_i | X_S) in nats by enumeration over the table.
double conditional_mi(const DiscreteJoint& pmf, int feature, Coalition s);

// I(Y; X_S) in nats.
double mutual_information(const DiscreteJoint& pmf, Coalition s);

// Table of the empirical distribution of integer-valued features (and
// integer labels when classification; a single placeholder class otherwise).
DiscreteJoint empirical_pmf(const Dataset& data);

struct LinearGaussian {
  std::vector<double> betas;
  double noise_sd = 0.0;
};

// X1 ~ Bernoulli(p), X2 = X1, Y = X1.
struct DuplicatedBernoulli {
  double p = 0.5;
};

// X1, X2 ~ Bernoulli(p) independently, Y = X1 xor X2.
struct XorBernoulli {
  double p = 0.5;
};

struct DiscreteJointSpec {
  DiscreteJoint pmf;
};

using SyntheticSpec = std::variant<LinearGaussian, DuplicatedBernoulli, XorBernoulli, DiscreteJointSpec>;

void validate_spec(const SyntheticSpec& spec);
std::string spec_kind(const SyntheticSpec& spec);

// Discrete specs as an explicit table; empty for linear_gaussian.
std::optional<DiscreteJoint> as_discrete(const SyntheticSpec& spec);

// Weighted rows representing the distribution of X given X_S = x_S.
// Present features carry x's values in every row.
struct ConditionalSupport {
  MatrixXd rows;
  VectorXd weights;
};

// Exact knowledge of a synthetic distribution: conditionals, optimal
// predictions and, where enumerable, exact SAGE values of the optimal model.
class GroundTruth {
 public:
  explicit GroundTruth(SyntheticSpec spec);

  const SyntheticSpec& spec() const { return spec_; }
  Index num_features() const { return num_features_; }
  Task task() const { return task_; }
  const DiscreteJoint* discrete() const { return discrete_ ? &*discrete_ : nullptr; }

  // Discrete specs: enumeration. linear_gaussian (independent standard
  // normal features): tensor Gauss-Hermite rule with at most
  // `max_points` rows, exact for polynomial models of low degree.
  ConditionalSupport conditional(const RowVectorXd& x, const FeatureMask& present,
                                 Index max_points = 4096) const;

  // Draw x_i from p(X_i | X_{-i} = x_{-i}).
  double sample_feature_given_rest(Index feature, const RowVectorXd& x,
                                   std::mt19937_64& rng) const;

  // E[Y | X = x] (regression) or p(y | X = x) (classification). Inputs off
  // the discrete support receive the class marginal.
  VectorXd optimal_prediction(const RowVectorXd& x) const;

  // Exact SAGE values of the optimal model with its natural loss (MSE for
  // linear_gaussian, cross-entropy for discrete specs).
  VectorXd exact_sage_values() const;

 private:
  SyntheticSpec spec_;
  std::optional<DiscreteJoint> discrete_;
  Index num_features_ = 0;
  Task task_;
};

struct SyntheticSample {
  Dataset data;
  GroundTruth truth;
};

SyntheticSample generate_synthetic(const SyntheticSpec& spec, Index n, std::uint64_t seed);

}  // namespace sage
