#include "helpers.hpp"

#include "sage/game.hpp"
#include "sage/imputer.hpp"
#include "sage/loss.hpp"
#include "sage/model.hpp"
#include "sage/stats.hpp"

#include <doctest.h>

#include <cmath>

using namespace sage;

namespace {

ModelPtr sum_model(VectorXd w) { return std::make_shared<LinearModel>(std::move(w), 0.0); }

double mean_se(const VectorXd& v) {
  return std::sqrt((v.array() - v.mean()).square().sum() / static_cast<double>(v.size() - 1) /
                   static_cast<double>(v.size()));
}

}  // namespace

TEST_CASE("evaluate_loss examples") {
  CHECK(evaluate_loss(LossFunction::mse(), (VectorXd(1) << 3).finished(), 1.0) == 4.0);
  CHECK(std::abs(evaluate_loss(LossFunction::cross_entropy(), (VectorXd(2) << 0.5, 0.5).finished(), 0) - 0.693147) <
        1e-6);
  const double clamp = evaluate_loss(LossFunction::cross_entropy(), (VectorXd(2) << 1.0, 0.0).finished(), 1);
  CHECK(std::abs(clamp - 27.631) < 1e-3);
  CHECK(clamp == -std::log(1e-12));
  CHECK_THROWS_AS(evaluate_loss(LossFunction::cross_entropy(), (VectorXd(2) << 0.5, 0.5).finished(), 2), Error);
  CHECK_THROWS_AS(LossFunction::parse("hinge"), Error);
  CHECK(LossFunction::parse("cross_entropy").kind() == LossFunction::Kind::cross_entropy);
}

TEST_CASE("losses are nonnegative") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const double a = u(rng);
    CHECK(LossFunction::cross_entropy()((VectorXd(2) << a, 1 - a).finished(), k % 2) >= 0.0);
    CHECK(LossFunction::mse()((VectorXd(1) << a * 10 - 5).finished(), u(rng)) >= 0.0);
  }
}

TEST_CASE("restricted_predict under marginal, mean and exact conditional imputers") {
  const ModelPtr f = sum_model((VectorXd(2) << 1, 1).finished());
  const MarginalImputer marginal((MatrixXd(2, 2) << 9, 0, -9, 2).finished());
  const RowVectorXd x = (RowVectorXd(2) << 5, 7).finished();
  FeatureMask s1(2);
  s1 << true, false;
  CHECK(restricted_predict(*f, marginal, x, s1)(0) == 6.0);

  const FeatureMask all = FeatureMask::Constant(2, true);
  const LogisticModel logit((MatrixXd(2, 2) << 0.3, -0.1, 0.7, 0.2).finished(), (RowVectorXd(2) << 0.1, -0.4).finished());
  const MarginalImputer marginal2(MatrixXd::Random(4, 2));
  CHECK(restricted_predict(logit, marginal2, x, all) == logit.predict(x));
  CHECK(restricted_predict(*f, MeanImputer((RowVectorXd(2) << 1, 2).finished()), x, all) == f->predict(x));

  const MeanImputer mean((RowVectorXd(2) << 1, 2).finished());
  CHECK(restricted_predict(*f, mean, x, s1)(0) == 7.0);
  CHECK(mean.mean_prediction(*f)(0) == 3.0);

  const ConditionalImputer cond(GroundTruth(DuplicatedBernoulli{0.5}));
  const ModelPtr first = sum_model((VectorXd(2) << 1, 0).finished());
  FeatureMask s2(2);
  s2 << false, true;
  for (double v : {0.0, 1.0}) {
    const RowVectorXd row = (RowVectorXd(2) << 1 - v, v).finished();
    CHECK(restricted_predict(*first, cond, row, s2)(0) == v);
  }
  CHECK_THROWS_AS(MarginalImputer(MatrixXd(0, 2)), Error);
}

TEST_CASE("exact conditional restriction of the oracle equals the restricted oracle on discrete specs") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<DiscreteOutcome> rows;
  double total = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 2; ++c)
        for (int y = 0; y < 3; ++y) {
          rows.push_back({{a, b, c}, y, u(rng)});
          total += rows.back().p;
        }
  for (auto& r : rows) r.p /= total;
  const DiscreteJoint pmf(rows);
  const GroundTruth truth(DiscreteJointSpec{pmf});
  const OracleModel oracle(truth);
  const ConditionalImputer cond(truth);
  for (const auto& [x, p] : pmf.feature_marginal()) {
    RowVectorXd row(3);
    for (int j = 0; j < 3; ++j) row(j) = x[static_cast<std::size_t>(j)];
    for (Coalition s = 0; s < 8; ++s) {
      const VectorXd got = restricted_predict(oracle, cond, row, mask_from_coalition(s, 3));
      const VectorXd want = *pmf.class_given(row, s);
      CHECK((got - want).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("predictive_power_game examples") {
  const auto lin = generate_synthetic(LinearGaussian{{1, 0}, 0.0}, 3000, 4);
  const ModelPtr oracle = std::make_shared<OracleModel>(lin.truth);
  const ImputerPtr cond = std::make_shared<ConditionalImputer>(lin.truth);
  const CooperativeGame g = predictive_power_game(oracle, cond, lin.data, LossFunction::mse());
  CHECK(g(0) == 0.0);
  // f_empty = E[Y] = 0 and f_{1} = x1 = y, so v({1}) is the mean of y^2 on this sample.
  const VectorXd y2 = lin.data.labels.array().square();
  CHECK(std::abs(g(1) - y2.mean()) < 1e-12);
  CHECK(std::abs(g(1) - 1.0) < 5 * mean_se(y2));

  const auto xr = generate_synthetic(XorBernoulli{0.5}, 2000, 4);
  const ModelPtr bayes = std::make_shared<OracleModel>(xr.truth);
  const ImputerPtr xc = std::make_shared<ConditionalImputer>(xr.truth);
  const VectorXd gains = predictive_power_gains(*bayes, *xc, xr.data, LossFunction::cross_entropy(), 1);
  const CooperativeGame xg = predictive_power_game(bayes, xc, xr.data, LossFunction::cross_entropy());
  CHECK(std::abs(xg(1)) <= 3 * mean_se(gains) + 1e-12);
  CHECK(xg(0) == 0.0);
}

TEST_CASE("linear_gaussian oracle coincides with the variance explained") {
  const std::vector<double> betas{1.0, -2.0, 0.5};
  const auto s = generate_synthetic(LinearGaussian{betas, 0.1}, 5000, 8);
  const OracleModel oracle(s.truth);
  const ConditionalImputer cond(s.truth);
  for (Coalition c = 1; c < 8; ++c) {
    const VectorXd gains = predictive_power_gains(oracle, cond, s.data, LossFunction::mse(), c);
    double want = 0.0;
    for (int i = 0; i < 3; ++i)
      if (contains(c, i)) want += betas[static_cast<std::size_t>(i)] * betas[static_cast<std::size_t>(i)];
    CHECK(std::abs(gains.mean() - want) < 5 * mean_se(gains));
  }
}

TEST_CASE("game increments match conditional mutual information") {
  std::vector<DiscreteOutcome> rows{{{0, 0}, 0, 0.30}, {{0, 0}, 1, 0.05}, {{0, 1}, 0, 0.10}, {{0, 1}, 1, 0.15},
                                    {{1, 0}, 0, 0.05}, {{1, 0}, 1, 0.10}, {{1, 1}, 0, 0.05}, {{1, 1}, 1, 0.20}};
  for (const SyntheticSpec& spec :
       {SyntheticSpec{XorBernoulli{0.5}}, SyntheticSpec{DuplicatedBernoulli{0.3}},
        SyntheticSpec{DiscreteJointSpec{DiscreteJoint(rows)}}}) {
    const auto s = generate_synthetic(spec, 20000, 21);
    const OracleModel bayes(s.truth);
    const ConditionalImputer cond(s.truth);
    const auto& pmf = *s.truth.discrete();
    for (int i = 0; i < 2; ++i) {
      for (Coalition c : {Coalition{0}, Coalition{1} << (1 - i)}) {
        const VectorXd with = predictive_power_gains(bayes, cond, s.data, LossFunction::cross_entropy(),
                                                     c | (Coalition{1} << i));
        const VectorXd without = predictive_power_gains(bayes, cond, s.data, LossFunction::cross_entropy(), c);
        const VectorXd inc = with - without;
        CHECK(std::abs(inc.mean() - conditional_mi(pmf, i, c)) <= 5 * mean_se(inc) + 1e-12);
      }
    }
  }
}

TEST_CASE("per_instance_game relations") {
  const Dataset d = testing::gaussian_regression(20, {1, -1, 2, 0.5}, 0.3, 6);
  const ModelPtr m = fit_linear(d, kDefaultRidge);
  const ImputerPtr imp = std::make_shared<MarginalImputer>(d.features.topRows(8));
  const CooperativeGame g = predictive_power_game(m, imp, d, LossFunction::mse());
  VectorXd avg = VectorXd::Zero(16);
  for (Index r = 0; r < d.rows(); ++r) {
    const CooperativeGame pi = per_instance_game(m, imp, d.features.row(r), d.labels(r), d.task, LossFunction::mse());
    CHECK(pi(0) == 0.0);
    avg += pi.tabulate();
  }
  avg /= static_cast<double>(d.rows());
  CHECK((avg - g.tabulate()).cwiseAbs().maxCoeff() < 1e-10);

  const Dataset one = d.row(3);
  const CooperativeGame g1 = predictive_power_game(m, imp, one, LossFunction::mse());
  const CooperativeGame p1 = per_instance_game(m, imp, one.features.row(0), one.labels(0), one.task, LossFunction::mse());
  CHECK((g1.tabulate() - p1.tabulate()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("variance_game examples") {
  const auto s = generate_synthetic(LinearGaussian{{1, 2}, 0.0}, 20000, 13);
  const ModelPtr f = sum_model((VectorXd(2) << 1, 2).finished());
  const ImputerPtr cond = std::make_shared<ConditionalImputer>(s.truth);
  const CooperativeGame w = variance_game(f, cond, s.data);
  CHECK(w(0) == 0.0);
  const double n = static_cast<double>(s.data.rows());
  CHECK(std::abs(w(3) - 5.0) < 5 * 5.0 * std::sqrt(2.0 / n));
  CHECK(std::abs(w(1) - 1.0) < 5 * 1.0 * std::sqrt(2.0 / n));

  const ModelPtr logit = std::make_shared<LogisticModel>(MatrixXd::Ones(2, 2), RowVectorXd::Zero(2));
  CHECK_THROWS_AS(variance_game(logit, cond, s.data), Error);
}

TEST_CASE("variance game equals the MSE game with Y = f(X)") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> level(0, 2);
  MatrixXd x(200, 4);
  for (Index r = 0; r < 200; ++r)
    for (Index c = 0; c < 4; ++c) x(r, c) = level(rng);
  const ModelPtr f = std::make_shared<FunctionModel>(Task::regression(), 4, [](const Eigen::Ref<const MatrixXd>& z) {
    MatrixXd out(z.rows(), 1);
    out.col(0) = z.col(0) + 2.0 * z.col(1).cwiseProduct(z.col(2)) - z.col(3).array().square().matrix();
    return out;
  });
  Dataset data = testing::make_dataset(x, f->predict_batch(x).col(0));
  const ImputerPtr imp = std::make_shared<ConditionalImputer>(GroundTruth(DiscreteJointSpec{empirical_pmf(data)}));
  const VectorXd w = variance_game(f, imp, data).tabulate();
  const VectorXd v = predictive_power_game(f, imp, data, LossFunction::mse()).tabulate();
  CHECK((w - v).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(w(15) > 0.0);
}

TEST_CASE("tabulated_game examples") {
  const CooperativeGame g = tabulated_game(2, std::map<Coalition, double>{{0, 0.0}, {1, 1.0}, {2, 2.0}, {3, 4.0}});
  CHECK(g(3) == 4.0);
  CHECK_THROWS_AS(tabulated_game(2, std::map<Coalition, double>{{0, 0.0}, {1, 1.0}, {3, 4.0}}), Error);
  CHECK_THROWS_AS(g(4), Error);

  VectorXd t(8);
  for (Coalition s = 0; s < 8; ++s) t(s) = coalition_size(s);
  const CooperativeGame add = tabulated_game(3, t);
  for (Coalition a = 0; a < 8; ++a)
    for (Coalition b = 0; b < 8; ++b)
      if ((a & b) == 0) CHECK(add(a | b) == add(a) + add(b));
  CHECK_THROWS_AS(tabulated_game(3, VectorXd::Zero(7)), Error);
}

TEST_CASE("every built game has v(empty) = 0") {
  const auto s = generate_synthetic(XorBernoulli{0.4}, 50, 2);
  const ModelPtr bayes = std::make_shared<OracleModel>(s.truth);
  const ImputerPtr marginal = std::make_shared<MarginalImputer>(s.data.features.topRows(10));
  const ImputerPtr cond = std::make_shared<ConditionalImputer>(s.truth);
  for (const auto& imp : {marginal, cond}) {
    CHECK(predictive_power_game(bayes, imp, s.data, LossFunction::cross_entropy())(0) == 0.0);
    CHECK(per_instance_game(bayes, imp, s.data.features.row(0), s.data.labels(0), s.data.task,
                            LossFunction::cross_entropy())(0) == 0.0);
  }
  const Dataset d = testing::gaussian_regression(30, {1, 2}, 0.1, 2);
  const ModelPtr lin = fit_linear(d, kDefaultRidge);
  CHECK(variance_game(lin, std::make_shared<MarginalImputer>(d.features), d)(0) == 0.0);
}
