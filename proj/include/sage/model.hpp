#pragma once

#include "sage/dataset.hpp"
#include "sage/loss.hpp"
#include "sage/synthetic.hpp"
#include "sage/types.hpp"

#include <atomic>
#include <functional>
#include <memory>
#include <string>

namespace sage {

// Opaque batch predictor. Regression models return M x 1, classifiers
// return M x K rows of class probabilities. Implementations must be pure
// and safe to call concurrently.
class Model {
 public:
  virtual ~Model() = default;

  virtual Task task() const = 0;
  virtual Index num_features() const = 0;
  virtual MatrixXd predict_batch(const Eigen::Ref<const MatrixXd>& x) const = 0;
  virtual std::string kind() const = 0;

  Index output_dim() const { return task().output_dim(); }
  VectorXd predict(const Eigen::Ref<const RowVectorXd>& x) const {
    return predict_batch(x).row(0).transpose();
  }
};

using ModelPtr = std::shared_ptr<const Model>;

class LinearModel final : public Model {
 public:
  LinearModel(VectorXd coefficients, double intercept)
      : coefficients_(std::move(coefficients)), intercept_(intercept) {}

  Task task() const override { return Task::regression(); }
  Index num_features() const override { return coefficients_.size(); }
  MatrixXd predict_batch(const Eigen::Ref<const MatrixXd>& x) const override;
  std::string kind() const override { return "linear"; }

  const VectorXd& coefficients() const { return coefficients_; }
  double intercept() const { return intercept_; }

 private:
  VectorXd coefficients_;
  double intercept_;
};

// Multinomial logistic regression: softmax(x W + b).
class LogisticModel final : public Model {
 public:
  LogisticModel(MatrixXd weights, RowVectorXd intercepts, bool converged = true, int iterations = 0)
      : weights_(std::move(weights)),
        intercepts_(std::move(intercepts)),
        converged_(converged),
        iterations_(iterations) {}

  Task task() const override { return Task::classification(static_cast<int>(weights_.cols())); }
  Index num_features() const override { return weights_.rows(); }
  MatrixXd predict_batch(const Eigen::Ref<const MatrixXd>& x) const override;
  std::string kind() const override { return "logistic"; }

  const MatrixXd& weights() const { return weights_; }
  const RowVectorXd& intercepts() const { return intercepts_; }
  bool converged() const { return converged_; }
  int iterations() const { return iterations_; }

 private:
  MatrixXd weights_;
  RowVectorXd intercepts_;
  bool converged_;
  int iterations_;
};

// Adapter for arbitrary callables.
class FunctionModel final : public Model {
 public:
  using Fn = std::function<MatrixXd(const Eigen::Ref<const MatrixXd>&)>;

  FunctionModel(Task task, Index num_features, Fn fn)
      : task_(task), num_features_(num_features), fn_(std::move(fn)) {}

  Task task() const override { return task_; }
  Index num_features() const override { return num_features_; }
  MatrixXd predict_batch(const Eigen::Ref<const MatrixXd>& x) const override { return fn_(x); }
  std::string kind() const override { return "function"; }

 private:
  Task task_;
  Index num_features_;
  Fn fn_;
};

// The optimal model of a synthetic distribution: E[Y | X] or p(y | X).
class OracleModel final : public Model {
 public:
  explicit OracleModel(GroundTruth truth) : truth_(std::move(truth)) {}

  Task task() const override { return truth_.task(); }
  Index num_features() const override { return truth_.num_features(); }
  MatrixXd predict_batch(const Eigen::Ref<const MatrixXd>& x) const override;
  std::string kind() const override { return "oracle"; }

  const GroundTruth& truth() const { return truth_; }

 private:
  GroundTruth truth_;
};

// Forwards to another model and counts predicted rows.
class CountingModel final : public Model {
 public:
  explicit CountingModel(const Model& inner) : inner_(inner) {}

  Task task() const override { return inner_.task(); }
  Index num_features() const override { return inner_.num_features(); }
  MatrixXd predict_batch(const Eigen::Ref<const MatrixXd>& x) const override {
    rows_.fetch_add(static_cast<std::uint64_t>(x.rows()), std::memory_order_relaxed);
    return inner_.predict_batch(x);
  }
  std::string kind() const override { return inner_.kind(); }

  std::uint64_t evaluations() const { return rows_.load(); }

 private:
  const Model& inner_;
  mutable std::atomic<std::uint64_t> rows_{0};
};

using Trainer = std::function<ModelPtr(const Dataset&)>;

inline constexpr double kDefaultRidge = 1e-8;

// Least squares with an unpenalized intercept, solved through the normal
// equations with `ridge` added to the coefficient block of the Gram matrix.
// Throws SingularSystemError for rank-deficient systems.
std::shared_ptr<const LinearModel> fit_linear(const Dataset& train, double ridge);

struct LogisticOptions {
  double l2 = 1e-3;
  int max_iter = 2000;
  double tol = 1e-6;
};

// Full-batch gradient descent with backtracking line search. A model that
// hits max_iter is still returned with converged() == false.
std::shared_ptr<const LogisticModel> fit_logistic(const Dataset& train, const LogisticOptions& options);

ModelPtr oracle_model(const SyntheticSpec& spec);

Trainer linear_trainer(double ridge = kDefaultRidge);
Trainer logistic_trainer(LogisticOptions options = {});

// Mean loss of the model over every row of `data`.
double evaluate_risk(const Model& model, const Dataset& data, const LossFunction& loss);

// Per-row losses.
VectorXd row_losses(const Model& model, const Dataset& data, const LossFunction& loss);

}  // namespace sage
