#include "sage/loss.hpp"

#include <algorithm>
#include <cmath>

namespace sage {

LossFunction LossFunction::parse(const std::string& name) {
  if (name == "mse") return mse();
  if (name == "cross_entropy") return cross_entropy();
  throw Error("unknown loss '" + name + "' (expected mse or cross_entropy)");
}

std::string LossFunction::name() const { return kind_ == Kind::mse ? "mse" : "cross_entropy"; }

double LossFunction::operator()(const Eigen::Ref<const VectorXd>& prediction, double target) const {
  if (kind_ == Kind::mse) {
    if (prediction.size() != 1) throw Error("mse expects a scalar prediction");
    const double r = prediction(0) - target;
    return r * r;
  }
  const auto cls = static_cast<Index>(target);
  if (target < 0 || cls >= prediction.size() || static_cast<double>(cls) != target)
    throw Error("class index " + std::to_string(target) + " out of range");
  const double p = std::clamp(prediction(cls), kProbabilityFloor, 1.0);
  return -std::log(p);
}

double LossFunction::optimal_constant_risk(const VectorXd& labels, int num_classes) const {
  const Index n = labels.size();
  if (n == 0) throw Error("optimal_constant_risk: no labels");
  if (kind_ == Kind::mse) {
    const double mu = labels.mean();
    return (labels.array() - mu).square().mean();
  }
  VectorXd freq = VectorXd::Zero(num_classes);
  for (Index r = 0; r < n; ++r) freq(static_cast<Index>(labels(r))) += 1.0;
  freq /= static_cast<double>(n);
  double risk = 0.0;
  for (Index r = 0; r < n; ++r) risk += (*this)(freq, labels(r));
  return risk / static_cast<double>(n);
}

bool LossFunction::compatible_with(const Task& task) const {
  return (kind_ == Kind::mse) != task.is_classification();
}

}  // namespace sage
