#include "sage/sampler.hpp"

#include <algorithm>
#include <exception>
#include <numeric>
#include <random>
#include <thread>

namespace sage {

void SamplerParams::validate() const {
  if (max_permutations < 1) throw Error("max_permutations must be positive");
  if (min_permutations < 1 || min_permutations > max_permutations)
    throw Error("min_permutations must lie in [1, max_permutations]");
  if (!(threshold > 0.0 && threshold <= 1.0)) throw Error("convergence threshold must lie in (0, 1]");
  if (check_interval < 1) throw Error("check_interval must be positive");
  if (workers < 1) throw Error("workers must be positive");
}

bool check_convergence(const VectorXd& sigma, std::int64_t n, const VectorXd& values, double threshold) {
  if (n < 2 || values.size() == 0) return false;
  const double range = values.maxCoeff() - values.minCoeff();
  if (!(range > 0.0)) return false;
  return sigma.maxCoeff() / std::sqrt(static_cast<double>(n)) < threshold * range;
}

bool check_convergence(const ConvergenceMonitor& monitor, double threshold) {
  return check_convergence(monitor.sigma(), monitor.count(), monitor.values(), threshold);
}

namespace {

struct Walk {
  Index row = 0;
  std::vector<Index> order;
  VectorXd deltas;
  double empty_loss = 0.0;
  double full_loss = 0.0;
};

// Iteration `k` of the estimator; depends only on (seed, k).
void walk_permutation(const Model& model, const Imputer& imputer, const Dataset& data,
                      const LossFunction& loss, const VectorXd& empty_pred, std::uint64_t seed,
                      std::int64_t k, Walk& out) {
  const Index d = data.cols();
  std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
  std::uniform_int_distribution<Index> pick_row(0, data.rows() - 1);
  out.row = pick_row(rng);
  out.order.resize(static_cast<std::size_t>(d));
  std::iota(out.order.begin(), out.order.end(), Index{0});
  std::shuffle(out.order.begin(), out.order.end(), rng);

  const auto x = data.features.row(out.row);
  const double y = data.labels(out.row);
  FeatureMask present = FeatureMask::Constant(d, false);
  out.deltas.resize(d);
  out.empty_loss = loss(empty_pred, y);
  double previous = out.empty_loss;
  for (Index feature : out.order) {
    present(feature) = true;
    const double current = loss(imputer.restricted_predict(model, x, present), y);
    out.deltas(feature) = previous - current;
    previous = current;
  }
  out.full_loss = previous;
}

}  // namespace

AttributionResult sample_sage(const Model& model, const Imputer& imputer, const Dataset& data,
                              const LossFunction& loss, const SamplerParams& params,
                              const TraceCallback& trace) {
  params.validate();
  if (data.rows() < 1) throw Error("sample_sage: empty dataset");
  if (model.num_features() != data.cols()) throw Error("sample_sage: model and data widths differ");
  if (!loss.compatible_with(data.task)) throw Error("sample_sage: loss does not fit the task");

  const CountingModel counted(model);
  const Index d = data.cols();
  const VectorXd empty_pred = imputer.mean_prediction(counted);

  ConvergenceMonitor monitor(d);
  bool converged = false;
  std::vector<Walk> block;
  std::int64_t done = 0;
  while (done < params.max_permutations) {
    const std::int64_t size = std::min(params.check_interval, params.max_permutations - done);
    block.resize(static_cast<std::size_t>(size));

    const int workers = static_cast<int>(std::min<std::int64_t>(params.workers, size));
    if (workers <= 1) {
      for (std::int64_t j = 0; j < size; ++j)
        walk_permutation(counted, imputer, data, loss, empty_pred, params.seed, done + j,
                         block[static_cast<std::size_t>(j)]);
    } else {
      std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
      std::vector<std::thread> pool;
      for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            for (std::int64_t j = w; j < size; j += workers)
              walk_permutation(counted, imputer, data, loss, empty_pred, params.seed, done + j,
                               block[static_cast<std::size_t>(j)]);
          } catch (...) {
            errors[static_cast<std::size_t>(w)] = std::current_exception();
          }
        });
      }
      for (auto& t : pool) t.join();
      for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    }

    // Merge strictly in iteration order.
    for (std::int64_t j = 0; j < size; ++j) {
      const Walk& walk = block[static_cast<std::size_t>(j)];
      monitor.add(walk.deltas);
      if (trace) trace({done + j, walk.row, walk.order, walk.deltas, walk.empty_loss, walk.full_loss});
    }
    done += size;

    if (params.stop_on_convergence && done >= params.min_permutations &&
        check_convergence(monitor, params.threshold)) {
      converged = true;
      break;
    }
  }
  if (!params.stop_on_convergence) converged = check_convergence(monitor, params.threshold);

  AttributionResult result;
  result.feature_names = data.feature_names;
  result.values = monitor.values();
  result.std_error = monitor.std_error();
  result.n_samples = monitor.count();
  result.converged = converged;
  result.model_evaluations = counted.evaluations();
  result.loss = loss.name();
  result.imputer = imputer.name();
  result.seed = params.seed;
  return result;
}

std::vector<AttributionResult> local_attributions(const Model& model, const Imputer& imputer,
                                                  const Dataset& data, const LossFunction& loss,
                                                  const SamplerParams& params,
                                                  const std::vector<Index>& rows) {
  std::vector<AttributionResult> out;
  out.reserve(rows.size());
  for (Index r : rows) {
    if (r < 0 || r >= data.rows()) throw Error("local_attributions: row index out of range");
    SamplerParams local = params;
    local.seed = derive_seed(params.seed ^ 0xA5A5A5A5ULL, static_cast<std::uint64_t>(r));
    AttributionResult res = sample_sage(model, imputer, data.row(r), loss, local);
    res.game = "per_instance";
    out.push_back(std::move(res));
  }
  return out;
}

AttributionResult average_attributions(const std::vector<AttributionResult>& locals) {
  if (locals.empty()) throw Error("average_attributions: nothing to average");
  AttributionResult out = locals.front();
  const auto r = static_cast<double>(locals.size());
  out.values.setZero();
  VectorXd var = VectorXd::Zero(out.values.size());
  out.n_samples = 0;
  out.model_evaluations = 0;
  out.converged = true;
  for (const auto& l : locals) {
    out.values += l.values;
    var += l.std_error.array().square().matrix();
    out.n_samples += l.n_samples;
    out.model_evaluations += l.model_evaluations;
    out.converged = out.converged && l.converged;
  }
  out.values /= r;
  out.std_error = var.array().sqrt() / r;
  out.game = "mean_per_instance";
  return out;
}

AttributionResult mean_shap_loss(const Model& model, const Imputer& imputer, const Dataset& data,
                                 const LossFunction& loss, const SamplerParams& per_instance_params) {
  if (data.rows() < 1) throw Error("mean_shap_loss: empty dataset");
  std::vector<Index> rows(static_cast<std::size_t>(data.rows()));
  std::iota(rows.begin(), rows.end(), Index{0});
  AttributionResult out =
      average_attributions(local_attributions(model, imputer, data, loss, per_instance_params, rows));
  out.seed = per_instance_params.seed;
  return out;
}

}  // namespace sage
