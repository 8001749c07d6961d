#include "sage/model.hpp"

#include <cmath>

namespace sage {

MatrixXd LinearModel::predict_batch(const Eigen::Ref<const MatrixXd>& x) const {
  if (x.cols() != coefficients_.size()) throw Error("linear model: input width mismatch");
  MatrixXd out = x * coefficients_;
  out.array() += intercept_;
  return out;
}

namespace {

// Row-wise softmax of logits, in place.
void softmax_rows(MatrixXd& logits) {
  const VectorXd row_max = logits.rowwise().maxCoeff();
  logits.colwise() -= row_max;
  logits = logits.array().exp().matrix();
  const VectorXd z = logits.rowwise().sum();
  logits.array().colwise() /= z.array();
}

}  // namespace

MatrixXd LogisticModel::predict_batch(const Eigen::Ref<const MatrixXd>& x) const {
  if (x.cols() != weights_.rows()) throw Error("logistic model: input width mismatch");
  MatrixXd logits = x * weights_;
  logits.rowwise() += intercepts_;
  softmax_rows(logits);
  return logits;
}

MatrixXd OracleModel::predict_batch(const Eigen::Ref<const MatrixXd>& x) const {
  if (x.cols() != truth_.num_features()) throw Error("oracle model: input width mismatch");
  MatrixXd out(x.rows(), truth_.task().output_dim());
  for (Index r = 0; r < x.rows(); ++r) out.row(r) = truth_.optimal_prediction(x.row(r)).transpose();
  return out;
}

std::shared_ptr<const LinearModel> fit_linear(const Dataset& train, double ridge) {
  if (train.task.is_classification()) throw Error("fit_linear needs a regression dataset");
  if (train.rows() < 1) throw Error("fit_linear: empty training set");
  if (!(ridge >= 0.0)) throw Error("fit_linear: ridge must be nonnegative");
  const Index n = train.rows();
  const Index d = train.cols();

  MatrixXd design(n, d + 1);
  design.leftCols(d) = train.features;
  design.col(d).setOnes();
  MatrixXd gram = design.transpose() * design;
  gram.diagonal().head(d).array() += ridge;
  const VectorXd rhs = design.transpose() * train.labels;

  VectorXd theta;
  if (ridge > 0.0) {
    Eigen::LDLT<MatrixXd> ldlt(gram);
    if (ldlt.info() != Eigen::Success) throw SingularSystemError("fit_linear: normal equations not solvable");
    theta = ldlt.solve(rhs);
  } else {
    Eigen::ColPivHouseholderQR<MatrixXd> qr(gram);
    // Relative rank threshold; an exactly collinear design loses a pivot.
    qr.setThreshold(1e-10);
    if (qr.rank() < d + 1)
      throw SingularSystemError("fit_linear: singular normal equations (rank " + std::to_string(qr.rank()) +
                                " < " + std::to_string(d + 1) + "); retry with ridge > 0");
    theta = qr.solve(rhs);
  }
  if (!theta.allFinite()) throw SingularSystemError("fit_linear: non-finite solution");
  return std::make_shared<LinearModel>(theta.head(d), theta(d));
}

namespace {

struct LogisticObjective {
  const MatrixXd& x;
  const MatrixXd& onehot;
  double l2;

  double value(const MatrixXd& w, const RowVectorXd& b) const {
    MatrixXd logits = x * w;
    logits.rowwise() += b;
    const VectorXd row_max = logits.rowwise().maxCoeff();
    const VectorXd lse = ((logits.colwise() - row_max).array().exp().rowwise().sum().log()).matrix() + row_max;
    const double ce = (lse.sum() - (logits.array() * onehot.array()).sum()) / static_cast<double>(x.rows());
    return ce + 0.5 * l2 * w.squaredNorm();
  }

  void gradient(const MatrixXd& w, const RowVectorXd& b, MatrixXd& gw, RowVectorXd& gb) const {
    MatrixXd p = x * w;
    p.rowwise() += b;
    softmax_rows(p);
    p -= onehot;
    const double inv_n = 1.0 / static_cast<double>(x.rows());
    gw = x.transpose() * p * inv_n + l2 * w;
    gb = p.colwise().sum() * inv_n;
  }
};

}  // namespace

std::shared_ptr<const LogisticModel> fit_logistic(const Dataset& train, const LogisticOptions& opt) {
  if (!train.task.is_classification()) throw Error("fit_logistic needs a classification dataset");
  if (train.rows() < 1) throw Error("fit_logistic: empty training set");
  if (!(opt.l2 >= 0.0) || opt.max_iter < 1 || !(opt.tol > 0.0))
    throw Error("fit_logistic: invalid hyperparameters");
  const Index n = train.rows();
  const Index d = train.cols();
  const Index k = train.task.num_classes;

  MatrixXd onehot = MatrixXd::Zero(n, k);
  for (Index r = 0; r < n; ++r) onehot(r, train.label_class(r)) = 1.0;
  const LogisticObjective objective{train.features, onehot, opt.l2};

  MatrixXd w = MatrixXd::Zero(d, k);
  RowVectorXd b = RowVectorXd::Zero(k);
  MatrixXd gw;
  RowVectorXd gb;
  double step = 1.0;
  double f = objective.value(w, b);
  bool converged = false;
  int iter = 0;
  for (; iter < opt.max_iter; ++iter) {
    objective.gradient(w, b, gw, gb);
    const double g2 = gw.squaredNorm() + gb.squaredNorm();
    if (std::sqrt(g2) < opt.tol) {
      converged = true;
      break;
    }
    // Armijo backtracking, starting from twice the last accepted step.
    step = std::min(step * 2.0, 1e6);
    while (true) {
      const MatrixXd w_new = w - step * gw;
      const RowVectorXd b_new = b - step * gb;
      const double f_new = objective.value(w_new, b_new);
      if (f_new <= f - 0.5 * step * g2 || step < 1e-14) {
        w = w_new;
        b = b_new;
        f = f_new;
        break;
      }
      step *= 0.5;
    }
  }
  return std::make_shared<LogisticModel>(std::move(w), std::move(b), converged, iter);
}

ModelPtr oracle_model(const SyntheticSpec& spec) { return std::make_shared<OracleModel>(GroundTruth(spec)); }

Trainer linear_trainer(double ridge) {
  return [ridge](const Dataset& d) -> ModelPtr { return fit_linear(d, ridge); };
}

Trainer logistic_trainer(LogisticOptions options) {
  return [options](const Dataset& d) -> ModelPtr { return fit_logistic(d, options); };
}

VectorXd row_losses(const Model& model, const Dataset& data, const LossFunction& loss) {
  if (model.num_features() != data.cols()) throw Error("evaluate_risk: dimension mismatch");
  if (model.task().is_classification() != data.task.is_classification())
    throw Error("evaluate_risk: model task does not match dataset task");
  const MatrixXd pred = model.predict_batch(data.features);
  VectorXd out(data.rows());
  for (Index r = 0; r < data.rows(); ++r) out(r) = loss(pred.row(r).transpose(), data.labels(r));
  return out;
}

double evaluate_risk(const Model& model, const Dataset& data, const LossFunction& loss) {
  return row_losses(model, data, loss).mean();
}

}  // namespace sage
