#include "helpers.hpp"

#include "sage/evalsuite.hpp"
#include "sage/imputer.hpp"
#include "sage/model.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace sage;

namespace {

struct Halves {
  Dataset train, test;
};

Halves halves(const Dataset& d) {
  std::vector<Index> a, b;
  for (Index r = 0; r < d.rows(); ++r) (r < d.rows() / 2 ? a : b).push_back(r);
  return {d.rows_subset(a), d.rows_subset(b)};
}

SamplerParams quick(std::uint64_t seed) {
  SamplerParams p;
  p.seed = seed;
  p.threshold = 0.02;
  p.max_permutations = 1 << 15;
  p.min_permutations = 512;
  return p;
}

}  // namespace

TEST_CASE("draw_subsets uses uniform size then a uniform subset") {
  const auto subsets = draw_subsets(5, 5000, 3);
  CHECK(subsets.size() == 5000);
  std::vector<int> by_size(6, 0);
  for (const auto& s : subsets) {
    REQUIRE(!s.empty());
    CHECK(std::is_sorted(s.begin(), s.end()));
    CHECK(std::set<Index>(s.begin(), s.end()).size() == s.size());
    CHECK(s.back() < 5);
    ++by_size[s.size()];
  }
  // each size has probability 1/5: 1000 expected, sd about 28
  for (int k = 1; k <= 5; ++k) CHECK(std::abs(by_size[k] - 1000) < 140);
  CHECK(draw_subsets(5, 50, 3) == draw_subsets(5, 50, 3));
  CHECK(draw_subsets(5, 50, 3) != draw_subsets(5, 50, 4));
}

TEST_CASE("subset_retraining_correlation on additive data") {
  const SyntheticSpec spec = LinearGaussian{{1, 2, -0.5, 1.5}, 0.0};
  const auto s = generate_synthetic(spec, 2000, 1);
  const auto parts = halves(s.data);
  const VectorXd sage = GroundTruth(spec).exact_sage_values();
  VectorXd shuffled = sage;
  std::swap(shuffled(0), shuffled(1));
  std::swap(shuffled(2), shuffled(3));

  const auto report =
      subset_retraining_correlation(linear_trainer(), parts.train, parts.test, LossFunction::mse(),
                                    {{"sage", sage, 0.0}, {"zeros", VectorXd::Zero(4), 0.0}, {"shuffled", shuffled, 0.0}},
                                    200, 7);
  CHECK(report.trials.size() == 200);
  CHECK(report.skipped_trials == 0);
  REQUIRE(report.methods[0].pearson);
  CHECK(*report.methods[0].pearson >= 0.99);
  CHECK(report.methods[0].spearman);
  CHECK_FALSE(report.methods[1].pearson);
  CHECK(report.warnings.size() == 1);
  CHECK(report.warnings[0].find("zeros") != std::string::npos);
  REQUIRE(report.methods[2].pearson);
  CHECK(*report.methods[2].pearson < *report.methods[0].pearson);

  for (const auto& t : report.trials) {
    double u = 0.0;
    for (Index i : t.subset) u += sage(i);
    CHECK(t.totals[0] == doctest::Approx(u));
  }
}

TEST_CASE("subset_retraining_correlation is affine invariant and deterministic") {
  const auto s = generate_synthetic(LinearGaussian{{1, 2, 0.5}, 0.5}, 1000, 2);
  const auto parts = halves(s.data);
  const VectorXd v = (VectorXd(3) << 0.8, 3.9, 0.3).finished();
  const auto run = [&](std::uint64_t seed) {
    return subset_retraining_correlation(linear_trainer(), parts.train, parts.test, LossFunction::mse(),
                                         {{"a", v, 0.1}, {"b", 2.5 * v, 2.5 * 0.1 + 7.0}}, 100, seed);
  };
  const auto r = run(3);
  CHECK(std::abs(*r.methods[0].pearson - *r.methods[1].pearson) < 1e-12);
  CHECK(*r.methods[0].spearman == *r.methods[1].spearman);
  const auto again = run(3);
  CHECK(*again.methods[0].pearson == *r.methods[0].pearson);
  for (std::size_t t = 0; t < r.trials.size(); ++t) CHECK(again.trials[t].subset == r.trials[t].subset);
}

TEST_CASE("subset_retraining_correlation skips failed retraining and checks widths") {
  const auto s = generate_synthetic(LinearGaussian{{1, 2, 0.5}, 0.5}, 400, 2);
  const auto parts = halves(s.data);
  const Trainer fussy = [](const Dataset& d) -> ModelPtr {
    if (d.cols() == 3) throw Error("refusing the full set");
    return fit_linear(d, kDefaultRidge);
  };
  const auto r = subset_retraining_correlation(fussy, parts.train, parts.test, LossFunction::mse(),
                                               {{"v", VectorXd::Ones(3), 0.0}}, 300, 4);
  CHECK(r.skipped_trials > 0);
  CHECK(r.trials.size() + static_cast<std::size_t>(r.skipped_trials) == 300);
  CHECK_THROWS_AS(subset_retraining_correlation(fussy, parts.train, parts.test, LossFunction::mse(),
                                                {{"v", VectorXd::Ones(2), 0.0}}, 10, 4),
                  Error);
}

TEST_CASE("feature_selection_curves examples") {
  const SyntheticSpec spec = LinearGaussian{{1, 2, 0, 0}, 0.1};
  const auto s = generate_synthetic(spec, 20000, 5);
  const auto parts = halves(s.data);
  const auto ranking = ranking_from_values(GroundTruth(spec).exact_sage_values());
  CHECK(ranking == std::vector<Index>{1, 0, 2, 3});

  const auto top = feature_selection_curves(linear_trainer(), parts.train, parts.test, LossFunction::mse(), ranking,
                                            {1, 4}, SelectionDirection::top);
  CHECK(top[0].features == std::vector<Index>{1});
  const double full = evaluate_risk(*linear_trainer()(parts.train), parts.test, LossFunction::mse());
  CHECK(top[1].test_loss == full);
  CHECK_FALSE(top[0].accuracy);

  const auto bottom = feature_selection_curves(linear_trainer(), parts.train, parts.test, LossFunction::mse(),
                                               ranking, {2}, SelectionDirection::bottom);
  CHECK(bottom[0].features == std::vector<Index>{2, 3});
  const double var_y = population_variance(parts.test.labels);
  CHECK(std::abs(bottom[0].test_loss - var_y) < 0.01 * var_y);
  CHECK(std::abs(var_y - 5.01) < 0.2);

  CHECK_THROWS_AS(feature_selection_curves(linear_trainer(), parts.train, parts.test, LossFunction::mse(), ranking,
                                           {5}, SelectionDirection::top),
                  Error);
  CHECK_THROWS_AS(feature_selection_curves(linear_trainer(), parts.train, parts.test, LossFunction::mse(), {0, 0, 1, 2},
                                           {1}, SelectionDirection::top),
                  Error);
}

TEST_CASE("feature_selection_curves reports accuracy for classification") {
  const auto s = generate_synthetic(DuplicatedBernoulli{0.5}, 1000, 6);
  const auto parts = halves(s.data);
  const auto curve = feature_selection_curves(logistic_trainer(), parts.train, parts.test, LossFunction::cross_entropy(),
                                              {0, 1}, {1}, SelectionDirection::top);
  REQUIRE(curve[0].accuracy);
  CHECK(*curve[0].accuracy == 1.0);
}

TEST_CASE("ranking_from_values is stable on ties") {
  CHECK(ranking_from_values((VectorXd(4) << 1, 3, 1, 3).finished()) == std::vector<Index>{1, 3, 0, 2});
}

TEST_CASE("monitor_corruption flags a shifted dominant feature") {
  const auto s = generate_synthetic(LinearGaussian{{0.5, 2, 1}, 0.2}, 1000, 7);
  const auto parts = halves(s.data);
  const auto model = fit_linear(parts.train, kDefaultRidge);
  // background = the reference split, so the unshifted columns average to the
  // background mean and the shift cannot leak into their credit
  const MarginalImputer imp(parts.test.features);
  const Dataset shifted = corrupt_feature(parts.test, 1, {ColumnTransform::Kind::shift, 1.0});
  CHECK(evaluate_risk(*model, shifted, LossFunction::mse()) > evaluate_risk(*model, parts.test, LossFunction::mse()));

  const auto report = monitor_corruption(*model, imp, LossFunction::mse(), parts.test, {{"shift", shifted}}, quick(3));
  REQUIRE(report.splits.size() == 1);
  const auto& split = report.splits[0];
  CHECK(split.deltas(1) < 0.0);
  CHECK(split.flagged == std::vector<bool>{false, true, false});
  CHECK(report.flag_multiplier == 3.0);
}

TEST_CASE("monitor_corruption leaves identical and ignored-feature splits unflagged") {
  const auto s = generate_synthetic(LinearGaussian{{1, 2, 1}, 0.2}, 400, 8);
  const LinearModel model((VectorXd(3) << 1, 2, 0).finished(), 0.0);
  const MarginalImputer imp(draw_background(s.data, 32, 2));
  const Dataset moved = corrupt_feature(s.data, 2, {ColumnTransform::Kind::shift, 5.0});
  const auto report = monitor_corruption(model, imp, LossFunction::mse(), s.data,
                                         {{"same", s.data}, {"ignored", moved}}, quick(4));
  CHECK(report.splits[0].result.values == report.reference.values);
  CHECK(report.splits[0].deltas.isZero(0.0));
  CHECK(report.splits[0].flagged == std::vector<bool>(3, false));
  CHECK(report.splits[1].result.values(2) == 0.0);
  CHECK_FALSE(report.splits[1].flagged[2]);

  const auto again = monitor_corruption(model, imp, LossFunction::mse(), s.data, {{"same", s.data}}, quick(4));
  CHECK(again.reference.values == report.reference.values);
  CHECK(again.reference.std_error == report.reference.std_error);

  CHECK_THROWS_AS(monitor_corruption(model, imp, LossFunction::mse(), s.data, {}, quick(4)), Error);
  Dataset renamed = s.data;
  renamed.feature_names[0] = "other";
  CHECK_THROWS_AS(monitor_corruption(model, imp, LossFunction::mse(), s.data, {{"r", renamed}}, quick(4)), Error);
}

TEST_CASE("efficiency_comparison curves") {
  const auto s = generate_synthetic(LinearGaussian{{1, 2, 0.5}, 0.3}, 120, 9);
  const auto model = fit_linear(s.data, kDefaultRidge);
  const MarginalImputer imp(draw_background(s.data, 16, 3));
  SamplerParams ref = quick(11);
  ref.threshold = 0.01;
  ref.max_permutations = 1 << 18;
  const auto reference = sample_sage(*model, imp, s.data, LossFunction::mse(), ref);
  REQUIRE(reference.converged);

  EfficiencyOptions opt;
  opt.sage_permutations = {64, 16, 256, 1024, 4096, 16, 16384};
  opt.shap_rows = {1, 4, 16, 64, 120, 500};
  opt.per_instance.threshold = 0.05;
  opt.per_instance.min_permutations = 64;
  opt.per_instance.check_interval = 32;
  opt.seed = 2;
  const auto report = efficiency_comparison(*model, imp, s.data, LossFunction::mse(), reference, opt);
  CHECK(report.sage.size() == 6);
  CHECK(report.shap.size() == 5);
  CHECK(report.shap.back().budget == 120);
  CHECK(report.shap_permutations_per_row >= 2);
  for (const auto* curve : {&report.sage, &report.shap})
    for (std::size_t i = 1; i < curve->size(); ++i)
      CHECK((*curve)[i].model_evaluations > (*curve)[i - 1].model_evaluations);
  CHECK(*report.sage.back().correlation > 0.999);
  CHECK(*report.shap.back().correlation > 0.99);
  CHECK(report.sage.back().mse < report.sage.front().mse);

  const auto sage_hit = evaluations_to_reach(report.sage, 0.99);
  const auto shap_hit = evaluations_to_reach(report.shap, 0.99);
  REQUIRE(sage_hit);
  REQUIRE(shap_hit);
  CHECK(*shap_hit > *sage_hit);
  CHECK_FALSE(evaluations_to_reach(report.sage, 1.5));

  const auto again = efficiency_comparison(*model, imp, s.data, LossFunction::mse(), reference, opt);
  CHECK(again.sage.back().mse == report.sage.back().mse);
  CHECK(again.shap.back().mse == report.shap.back().mse);
}

TEST_CASE("efficiency_comparison on a single row: the estimators coincide") {
  const auto s = generate_synthetic(LinearGaussian{{1, 2, 0.5}, 0.3}, 50, 10);
  const auto model = fit_linear(s.data, kDefaultRidge);
  const MarginalImputer imp(draw_background(s.data, 16, 3));
  const Dataset one = s.data.row(3);
  SamplerParams ref = quick(12);
  ref.threshold = 0.01;
  const auto reference = sample_sage(*model, imp, one, LossFunction::mse(), ref);

  EfficiencyOptions opt;
  opt.sage_permutations = {256};
  opt.shap_rows = {1};
  opt.per_instance.min_permutations = 256;
  opt.per_instance.max_permutations = 256;
  opt.seed = 5;
  const auto report = efficiency_comparison(*model, imp, one, LossFunction::mse(), reference, opt);
  REQUIRE(report.shap.size() == 1);
  CHECK(report.shap_permutations_per_row == 256);
  CHECK(report.shap[0].model_evaluations == report.sage[0].model_evaluations);

  // same budget, same row: both errors sit at the sampling noise of 256 permutations
  SamplerParams p;
  p.max_permutations = 256;
  p.min_permutations = 1;
  p.stop_on_convergence = false;
  p.seed = 77;
  const auto probe = sample_sage(*model, imp, one, LossFunction::mse(), p);
  const double noise = probe.std_error.squaredNorm() / 3.0;
  CHECK(report.sage[0].mse < 10 * noise);
  CHECK(report.shap[0].mse < 10 * noise);
}
