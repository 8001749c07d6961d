#pragma once

#include "sage/types.hpp"

#include <string>

namespace sage {

inline constexpr double kProbabilityFloor = 1e-12;

class LossFunction {
 public:
  enum class Kind { mse, cross_entropy };

  LossFunction() = default;
  explicit LossFunction(Kind kind) : kind_(kind) {}

  static LossFunction mse() { return LossFunction(Kind::mse); }
  static LossFunction cross_entropy() { return LossFunction(Kind::cross_entropy); }
  static LossFunction parse(const std::string& name);

  Kind kind() const { return kind_; }
  std::string name() const;

  // Squared error for mse; -log of the clamped true-class probability for
  // cross-entropy (target is the class index).
  double operator()(const Eigen::Ref<const VectorXd>& prediction, double target) const;

  // Loss of the best constant prediction on these labels: the label mean
  // (mse) or the class frequencies (cross-entropy).
  double optimal_constant_risk(const VectorXd& labels, int num_classes) const;

  bool compatible_with(const Task& task) const;

 private:
  Kind kind_ = Kind::mse;
};

inline double evaluate_loss(const LossFunction& loss, const Eigen::Ref<const VectorXd>& prediction,
                            double target) {
  return loss(prediction, target);
}

}  // namespace sage
