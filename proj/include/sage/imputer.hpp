#pragma once

#include "sage/dataset.hpp"
#include "sage/model.hpp"
#include "sage/synthetic.hpp"

#include <memory>
#include <string>

namespace sage {

// Strategy for marginalizing held-out features: realizes the restricted
// model f_S(x_S) for any model.
class Imputer {
 public:
  virtual ~Imputer() = default;

  virtual std::string name() const = 0;

  // f_S(x_S). With every feature present this is exactly model.predict(x).
  VectorXd restricted_predict(const Model& model, const Eigen::Ref<const RowVectorXd>& x,
                              const FeatureMask& present) const;

  // f_empty, the prediction with no features observed.
  virtual VectorXd mean_prediction(const Model& model) const = 0;

 protected:
  virtual VectorXd impute(const Model& model, const Eigen::Ref<const RowVectorXd>& x,
                          const FeatureMask& present) const = 0;
};

using ImputerPtr = std::shared_ptr<const Imputer>;

// Missing features are drawn from a fixed background sample (feature
// independence); averages the model over every background row.
class MarginalImputer final : public Imputer {
 public:
  explicit MarginalImputer(MatrixXd background);

  std::string name() const override { return "marginal"; }
  VectorXd mean_prediction(const Model& model) const override;
  const MatrixXd& background() const { return background_; }

 protected:
  VectorXd impute(const Model& model, const Eigen::Ref<const RowVectorXd>& x,
                  const FeatureMask& present) const override;

 private:
  MatrixXd background_;
};

// Missing features replaced by column means.
class MeanImputer final : public Imputer {
 public:
  explicit MeanImputer(RowVectorXd means);
  static MeanImputer from_data(const Dataset& data) { return MeanImputer(data.features.colwise().mean()); }

  std::string name() const override { return "mean"; }
  VectorXd mean_prediction(const Model& model) const override;

 protected:
  VectorXd impute(const Model& model, const Eigen::Ref<const RowVectorXd>& x,
                  const FeatureMask& present) const override;

 private:
  RowVectorXd means_;
};

// Missing features integrated against the true conditional distribution of
// a synthetic spec (enumeration or Gauss-Hermite quadrature).
class ConditionalImputer final : public Imputer {
 public:
  explicit ConditionalImputer(GroundTruth truth) : truth_(std::move(truth)) {}

  std::string name() const override { return "exact_conditional"; }
  VectorXd mean_prediction(const Model& model) const override;
  const GroundTruth& truth() const { return truth_; }

 protected:
  VectorXd impute(const Model& model, const Eigen::Ref<const RowVectorXd>& x,
                  const FeatureMask& present) const override;

 private:
  GroundTruth truth_;
};

// First min(size, N) rows of a seeded shuffle of `data`.
MatrixXd draw_background(const Dataset& data, Index size, std::uint64_t seed);

inline VectorXd restricted_predict(const Model& model, const Imputer& imputer,
                                   const Eigen::Ref<const RowVectorXd>& x, const FeatureMask& present) {
  return imputer.restricted_predict(model, x, present);
}

}  // namespace sage
