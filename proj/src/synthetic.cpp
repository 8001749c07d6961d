#include "sage/synthetic.hpp"

#include "sage/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace sage {

namespace {

std::vector<int> key_for(const std::vector<int>& x, Coalition s) {
  std::vector<int> key;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (contains(s, static_cast<int>(i))) key.push_back(x[i]);
  return key;
}

bool matches(const std::vector<int>& x, const RowVectorXd& row, Coalition s) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (contains(s, static_cast<int>(i)) && static_cast<double>(x[i]) != row(static_cast<Index>(i)))
      return false;
  return true;
}

Coalition coalition_from_mask(const FeatureMask& m) {
  Coalition s = 0;
  for (Index i = 0; i < m.size(); ++i)
    if (m(i)) s |= Coalition{1} << i;
  return s;
}

double xlogx(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

}  // namespace

DiscreteJoint::DiscreteJoint(std::vector<DiscreteOutcome> outcomes) {
  if (outcomes.empty()) throw Error("discrete pmf has no outcomes");
  num_features_ = static_cast<int>(outcomes.front().x.size());
  if (num_features_ < 1 || num_features_ > kMaxGamePlayers)
    throw Error("discrete pmf must have between 1 and 30 features");
  std::map<std::pair<std::vector<int>, int>, double> merged;
  double total = 0.0;
  for (const auto& o : outcomes) {
    if (static_cast<int>(o.x.size()) != num_features_) throw Error("discrete pmf rows differ in width");
    if (!(o.p >= 0.0) || !std::isfinite(o.p)) throw Error("discrete pmf has a negative or non-finite entry");
    if (o.y < 0) throw Error("discrete pmf has a negative class label");
    total += o.p;
    num_classes_ = std::max(num_classes_, o.y + 1);
    if (o.p > 0.0) merged[{o.x, o.y}] += o.p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw Error("discrete pmf must sum to 1");

  std::map<std::vector<int>, double> px;
  for (const auto& [key, p] : merged) {
    outcomes_.push_back({key.first, key.second, p});
    px[key.first] += p;
  }
  feature_marginal_.assign(px.begin(), px.end());
}

VectorXd DiscreteJoint::class_marginal() const {
  VectorXd p = VectorXd::Zero(num_classes_);
  for (const auto& o : outcomes_) p(o.y) += o.p;
  return p;
}

std::optional<VectorXd> DiscreteJoint::class_given(const RowVectorXd& x, Coalition s) const {
  VectorXd p = VectorXd::Zero(num_classes_);
  for (const auto& o : outcomes_)
    if (matches(o.x, x, s)) p(o.y) += o.p;
  const double z = p.sum();
  if (!(z > 0.0)) return std::nullopt;
  return VectorXd(p / z);
}

double DiscreteJoint::conditional_entropy(Coalition s) const {
  // H(Y | X_S) = H(X_S) - H(X_S, Y)
  std::map<std::vector<int>, double> p_xs;
  std::map<std::pair<std::vector<int>, int>, double> p_xsy;
  for (const auto& o : outcomes_) {
    auto key = key_for(o.x, s);
    p_xs[key] += o.p;
    p_xsy[{std::move(key), o.y}] += o.p;
  }
  double h = 0.0;
  for (const auto& [k, p] : p_xsy) h -= xlogx(p);
  for (const auto& [k, p] : p_xs) h += xlogx(p);
  return std::max(h, 0.0);
}

double conditional_mi(const DiscreteJoint& pmf, int feature, Coalition s) {
  if (feature < 0 || feature >= pmf.num_features()) throw Error("feature index out of range");
  if (contains(s, feature)) throw Error("conditional_mi: feature is already in the conditioning set");
  const double mi = pmf.conditional_entropy(s) - pmf.conditional_entropy(s | (Coalition{1} << feature));
  return std::max(mi, 0.0);
}

double mutual_information(const DiscreteJoint& pmf, Coalition s) {
  return std::max(pmf.conditional_entropy(0) - pmf.conditional_entropy(s), 0.0);
}

DiscreteJoint empirical_pmf(const Dataset& data) {
  const double w = 1.0 / static_cast<double>(data.rows());
  std::vector<DiscreteOutcome> outcomes;
  outcomes.reserve(static_cast<std::size_t>(data.rows()));
  for (Index r = 0; r < data.rows(); ++r) {
    DiscreteOutcome o;
    for (Index c = 0; c < data.cols(); ++c) {
      const double v = data.features(r, c);
      if (v != std::round(v)) throw Error("empirical_pmf needs integer-valued features");
      o.x.push_back(static_cast<int>(v));
    }
    o.y = data.task.is_classification() ? data.label_class(r) : 0;
    o.p = w;
    outcomes.push_back(std::move(o));
  }
  // Repeated summation of 1/N can drift by a few ulps; renormalize.
  double total = 0.0;
  for (const auto& o : outcomes) total += o.p;
  for (auto& o : outcomes) o.p /= total;
  return DiscreteJoint(std::move(outcomes));
}

void validate_spec(const SyntheticSpec& spec) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LinearGaussian>) {
          if (s.betas.empty()) throw Error("linear_gaussian needs at least one beta");
          for (double b : s.betas)
            if (!std::isfinite(b)) throw Error("linear_gaussian betas must be finite");
          if (!(s.noise_sd >= 0.0) || !std::isfinite(s.noise_sd))
            throw Error("linear_gaussian noise_sd must be finite and nonnegative");
        } else if constexpr (std::is_same_v<T, DiscreteJointSpec>) {
          if (s.pmf.outcomes().empty()) throw Error("discrete_joint pmf is empty");
        } else {
          if (!(s.p > 0.0 && s.p < 1.0)) throw Error("Bernoulli parameter must lie in (0, 1)");
        }
      },
      spec);
}

std::string spec_kind(const SyntheticSpec& spec) {
  switch (spec.index()) {
    case 0: return "linear_gaussian";
    case 1: return "duplicated_bernoulli";
    case 2: return "xor_bernoulli";
    default: return "discrete_joint";
  }
}

std::optional<DiscreteJoint> as_discrete(const SyntheticSpec& spec) {
  if (const auto* dup = std::get_if<DuplicatedBernoulli>(&spec)) {
    return DiscreteJoint({{{0, 0}, 0, 1.0 - dup->p}, {{1, 1}, 1, dup->p}});
  }
  if (const auto* x = std::get_if<XorBernoulli>(&spec)) {
    const double q = 1.0 - x->p;
    return DiscreteJoint({{{0, 0}, 0, q * q},
                          {{0, 1}, 1, q * x->p},
                          {{1, 0}, 1, x->p * q},
                          {{1, 1}, 0, x->p * x->p}});
  }
  if (const auto* j = std::get_if<DiscreteJointSpec>(&spec)) return j->pmf;
  return std::nullopt;
}

GroundTruth::GroundTruth(SyntheticSpec spec) : spec_(std::move(spec)) {
  validate_spec(spec_);
  discrete_ = as_discrete(spec_);
  if (discrete_) {
    num_features_ = discrete_->num_features();
    task_ = Task::classification(std::max(discrete_->num_classes(), 2));
  } else {
    num_features_ = static_cast<Index>(std::get<LinearGaussian>(spec_).betas.size());
    task_ = Task::regression();
  }
}

ConditionalSupport GroundTruth::conditional(const RowVectorXd& x, const FeatureMask& present,
                                            Index max_points) const {
  if (x.size() != num_features_ || present.size() != num_features_)
    throw Error("conditional: row width does not match the distribution");
  ConditionalSupport out;
  if (discrete_) {
    const Coalition s = coalition_from_mask(present);
    std::vector<const std::pair<std::vector<int>, double>*> hits;
    double z = 0.0;
    for (const auto& entry : discrete_->feature_marginal()) {
      if (matches(entry.first, x, s)) {
        hits.push_back(&entry);
        z += entry.second;
      }
    }
    if (hits.empty()) throw Error("conditional: observed features have zero probability");
    out.rows.resize(static_cast<Index>(hits.size()), num_features_);
    out.weights.resize(static_cast<Index>(hits.size()));
    for (std::size_t k = 0; k < hits.size(); ++k) {
      for (Index c = 0; c < num_features_; ++c)
        out.rows(static_cast<Index>(k), c) = static_cast<double>(hits[k]->first[static_cast<std::size_t>(c)]);
      out.weights(static_cast<Index>(k)) = hits[k]->second / z;
    }
    return out;
  }

  // Independent standard normal features: missing block is N(0, I).
  std::vector<Index> missing;
  for (Index i = 0; i < num_features_; ++i)
    if (!present(i)) missing.push_back(i);
  const auto k = static_cast<int>(missing.size());
  int per_dim = 8;
  while (per_dim > 1 && std::pow(static_cast<double>(per_dim), k) > static_cast<double>(max_points)) --per_dim;
  const auto [nodes, weights] = gauss_hermite<double>(per_dim);
  Index total = 1;
  for (int j = 0; j < k; ++j) total *= per_dim;
  out.rows = x.replicate(total, 1);
  out.weights = VectorXd::Ones(total);
  for (Index r = 0; r < total; ++r) {
    Index code = r;
    for (int j = 0; j < k; ++j) {
      const Index node = code % per_dim;
      code /= per_dim;
      out.rows(r, missing[static_cast<std::size_t>(j)]) = nodes(node);
      out.weights(r) *= weights(node);
    }
  }
  return out;
}

double GroundTruth::sample_feature_given_rest(Index feature, const RowVectorXd& x,
                                              std::mt19937_64& rng) const {
  if (feature < 0 || feature >= num_features_) throw Error("feature index out of range");
  if (!discrete_) {
    std::normal_distribution<double> normal(0.0, 1.0);
    return normal(rng);
  }
  const Coalition rest = full_coalition(static_cast<int>(num_features_)) & ~(Coalition{1} << feature);
  std::vector<double> values;
  std::vector<double> weights;
  for (const auto& entry : discrete_->feature_marginal()) {
    if (matches(entry.first, x, rest)) {
      values.push_back(static_cast<double>(entry.first[static_cast<std::size_t>(feature)]));
      weights.push_back(entry.second);
    }
  }
  if (values.empty()) throw Error("conditional: observed features have zero probability");
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  return values[pick(rng)];
}

VectorXd GroundTruth::optimal_prediction(const RowVectorXd& x) const {
  if (x.size() != num_features_) throw Error("optimal_prediction: row width mismatch");
  if (!discrete_) {
    const auto& betas = std::get<LinearGaussian>(spec_).betas;
    double y = 0.0;
    for (Index i = 0; i < num_features_; ++i) y += betas[static_cast<std::size_t>(i)] * x(i);
    return VectorXd::Constant(1, y);
  }
  VectorXd out = VectorXd::Zero(task_.num_classes);
  const auto given = discrete_->class_given(x, full_coalition(static_cast<int>(num_features_)));
  const VectorXd p = given ? *given : discrete_->class_marginal();
  out.head(p.size()) = p;
  return out;
}

VectorXd GroundTruth::exact_sage_values() const {
  const auto d = static_cast<int>(num_features_);
  VectorXd phi = VectorXd::Zero(d);
  if (!discrete_) {
    const auto& betas = std::get<LinearGaussian>(spec_).betas;
    for (int i = 0; i < d; ++i) phi(i) = betas[static_cast<std::size_t>(i)] * betas[static_cast<std::size_t>(i)];
    return phi;
  }
  // Shapley-weighted average of conditional mutual information.
  for (int i = 0; i < d; ++i) {
    const Coalition others = full_coalition(d) & ~(Coalition{1} << i);
    for (Coalition s = 0;; s = (s - others) & others) {
      const int size = coalition_size(s);
      double binom = 1.0;
      for (int k = 1; k <= size; ++k) binom = binom * (d - 1 - size + k) / k;
      phi(i) += conditional_mi(*discrete_, i, s) / (d * binom);
      if (s == others) break;
    }
  }
  return phi;
}

SyntheticSample generate_synthetic(const SyntheticSpec& spec, Index n, std::uint64_t seed) {
  if (n < 1) throw Error("generate_synthetic needs n >= 1");
  GroundTruth truth(spec);
  const Index d = truth.num_features();
  Dataset data;
  data.features.resize(n, d);
  data.labels.resize(n);
  data.feature_names = default_feature_names(d);
  data.task = truth.task();
  std::mt19937_64 rng(seed);

  if (const auto* lg = std::get_if<LinearGaussian>(&spec)) {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Index r = 0; r < n; ++r) {
      double y = 0.0;
      for (Index c = 0; c < d; ++c) {
        data.features(r, c) = normal(rng);
        y += lg->betas[static_cast<std::size_t>(c)] * data.features(r, c);
      }
      data.labels(r) = y + lg->noise_sd * normal(rng);
    }
  } else {
    const auto& table = truth.discrete()->outcomes();
    std::vector<double> probs;
    for (const auto& o : table) probs.push_back(o.p);
    std::discrete_distribution<std::size_t> pick(probs.begin(), probs.end());
    for (Index r = 0; r < n; ++r) {
      const auto& o = table[pick(rng)];
      for (Index c = 0; c < d; ++c) data.features(r, c) = o.x[static_cast<std::size_t>(c)];
      data.labels(r) = o.y;
    }
  }
  data.validate();
  return {std::move(data), std::move(truth)};
}

}  // namespace sage
